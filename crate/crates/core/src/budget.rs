//! Global resource caps.
//!
//! Defaults can be overridden through the `PADIC_K1_BUDGET` environment variable, a
//! comma separated list of `key=value` pairs, e.g. `homology_order=128,cosets=500000`.

use std::sync::OnceLock;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest group order accepted by the homology routines.
    pub homology_order: usize,
    /// Largest `|κ[G]|` enumerated by brute-force K1 computations.
    pub kappa_ring: u64,
    /// Coset table size limit for Todd–Coxeter enumeration.
    pub cosets: usize,
    /// Largest group order for character tables.
    pub character_order: usize,
    /// Largest absolute degree a residue tower may reach.
    pub tower_degree: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            homology_order: 64,
            kappa_ring: 1 << 16,
            cosets: 200_000,
            character_order: 256,
            tower_degree: 4096,
        }
    }
}

impl Budget {
    pub fn parse(spec: &str) -> Result<Budget, String> {
        let mut b = Budget::default();
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| format!("budget entry `{part}` is not of the form key=value"))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| format!("budget value `{v}` for `{k}` is not an integer"))?;
            match k.trim() {
                "homology_order" => b.homology_order = v as usize,
                "kappa_ring" => b.kappa_ring = v,
                "cosets" => b.cosets = v as usize,
                "character_order" => b.character_order = v as usize,
                "tower_degree" => b.tower_degree = v as usize,
                other => return Err(format!("unknown budget key `{other}`")),
            }
        }
        Ok(b)
    }

    /// The process-wide budget, read once from the environment.
    pub fn global() -> &'static Budget {
        static GLOBAL: OnceLock<Budget> = OnceLock::new();
        GLOBAL.get_or_init(|| match std::env::var("PADIC_K1_BUDGET") {
            Ok(s) => Budget::parse(&s).unwrap_or_else(|e| {
                eprintln!("ignoring PADIC_K1_BUDGET: {e}");
                Budget::default()
            }),
            Err(_) => Budget::default(),
        })
    }
}
