//! Presentations and Todd–Coxeter coset enumeration (HLT with coincidence handling).

use super::GroupError;

/// A finite presentation. Relator letters are `(generator, ±1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub gen_names: Vec<String>,
    pub relators: Vec<Vec<(usize, i8)>>,
}

impl Presentation {
    pub fn new(gen_names: &[&str], relators: &[&str]) -> Result<Self, GroupError> {
        let names: Vec<String> = gen_names.iter().map(|s| s.to_string()).collect();
        let relators = relators.iter().map(|r| parse_word(r, &names)).collect::<Result<_, _>>()?;
        Ok(Presentation { gen_names: names, relators })
    }

    /// Text format: a first line `gens k`, then one relator per line such as
    /// `a b a^-1 b^-1` or `a^4`. Generators are named `a`, `b`, ... Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let head = lines.next().ok_or_else(|| GroupError::BadPresentation("empty presentation".into()))?;
        let k: usize = head
            .strip_prefix("gens")
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| GroupError::BadPresentation(format!("expected `gens k`, found `{head}`")))?;
        if k == 0 || k > 26 {
            return Err(GroupError::BadPresentation("generator count must be between 1 and 26".into()));
        }
        let names: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let relators = lines.map(|l| parse_word(l, &names)).collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation { gen_names: names, relators })
    }
}

fn parse_word(text: &str, names: &[String]) -> Result<Vec<(usize, i8)>, GroupError> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| GroupError::BadPresentation(format!("bad exponent in `{tok}`")))?;
                (n, e)
            }
            None => (tok, 1),
        };
        let g = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| GroupError::BadPresentation(format!("unknown generator `{name}`")))?;
        let sign = if exp < 0 { -1 } else { 1 };
        for _ in 0..exp.unsigned_abs() {
            out.push((g, sign));
        }
    }
    if out.is_empty() {
        return Err(GroupError::BadPresentation(format!("empty relator `{text}`")));
    }
    Ok(out)
}

const NONE: usize = usize::MAX;

struct Enumerator {
    ncols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    bound: usize,
}

impl Enumerator {
    fn inv(x: usize) -> usize {
        x ^ 1
    }

    fn rep(&mut self, mut c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), GroupError> {
        let n = self.table.len();
        if n >= self.bound {
            return Err(GroupError::EnumerationBudgetExceeded(self.bound));
        }
        self.table.push(vec![NONE; self.ncols]);
        self.parent.push(n);
        self.table[c][x] = n;
        self.table[n][Self::inv(x)] = c;
        Ok(())
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let a = self.rep(k);
        let b = self.rep(l);
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.table[g][x];
                if d == NONE {
                    continue;
                }
                self.table[d][Self::inv(x)] = NONE;
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x];
                    self.merge(nu, t, &mut queue);
                } else if self.table[nu][Self::inv(x)] != NONE {
                    let t = self.table[nu][Self::inv(x)];
                    self.merge(mu, t, &mut queue);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][Self::inv(x)] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, a: usize, w: &[usize]) -> Result<(), GroupError> {
        let mut f = a;
        let mut b = a;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != a {
                    self.coincidence(f, a);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][Self::inv(w[j as usize])] != NONE {
                b = self.table[b][Self::inv(w[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][Self::inv(w[i])] = f;
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }
}

/// Enumerates the cosets of the trivial subgroup. Returns the right action table
/// `act[c][g]` of each generator on the `n` elements (element 0 is the identity), and
/// `n`.
pub fn enumerate(pres: &Presentation, bound: usize) -> Result<(Vec<Vec<usize>>, usize), GroupError> {
    let k = pres.gen_names.len();
    let ncols = 2 * k;
    // columns: 2g for g, 2g+1 for g^-1
    let rels: Vec<Vec<usize>> = pres
        .relators
        .iter()
        .map(|r| r.iter().map(|&(g, s)| if s > 0 { 2 * g } else { 2 * g + 1 }).collect())
        .collect();
    let mut e = Enumerator { ncols, table: vec![vec![NONE; ncols]], parent: vec![0], bound };
    let mut a = 0;
    while a < e.table.len() {
        for r in &rels {
            if !e.live(a) {
                break;
            }
            e.scan_and_fill(a, r)?;
        }
        if e.live(a) {
            for x in 0..ncols {
                if e.table[a][x] == NONE {
                    e.define(a, x)?;
                }
            }
        }
        a += 1;
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.live(c)).collect();
    let mut index = vec![NONE; e.table.len()];
    for (i, &c) in live.iter().enumerate() {
        index[c] = i;
    }
    let act: Vec<Vec<usize>> = live
        .iter()
        .map(|&c| (0..k).map(|g| index[e.rep(e.table[c][2 * g])]).collect())
        .collect();
    Ok((act, live.len()))
}
