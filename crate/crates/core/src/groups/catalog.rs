//! Named groups. Products of cyclic groups are accepted in any form `C2xC4x...`.

use super::{Group, GroupError, Presentation};

const NAMED: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C8", "C9", "C16", "C27", "C2xC2", "C2xC4", "C2xC2xC2", "C3xC3", "C3xC9",
    "D4", "Q8", "S3", "Heis3",
];

/// Names of the built-in catalog, in a fixed order.
pub fn catalog_names() -> &'static [&'static str] {
    NAMED
}

/// Every catalog group whose order is a power of `p` (the trivial group included).
pub fn catalog_p_groups(p: u64) -> Vec<Group> {
    NAMED
        .iter()
        .map(|n| group_by_name(n).expect("catalog entries load"))
        .filter(|g| g.is_p_group(p))
        .collect()
}

fn cyclic(n: usize) -> Group {
    let rows = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let gens = if n == 1 { vec![] } else { vec![1] };
    let names = gens.iter().map(|_| "g".to_string()).collect();
    Group::from_table_named(&format!("C{n}"), rows, Some((gens, names))).expect("cyclic table")
}

fn parse_cyclic_product(name: &str) -> Option<Vec<usize>> {
    name.split('x')
        .map(|f| f.strip_prefix('C')?.parse::<usize>().ok().filter(|&n| (1..=4096).contains(&n)))
        .collect()
}

/// Product of cyclic groups; element `(x_1, ..., x_k)` has index in mixed radix with
/// the last factor fastest.
pub(crate) fn abelian_product(orders: &[usize]) -> Result<Group, GroupError> {
    let name = orders.iter().map(|n| format!("C{n}")).collect::<Vec<_>>().join("x");
    if orders.len() == 1 {
        return Ok(cyclic(orders[0]));
    }
    let n: usize = orders.iter().product();
    if n > 1 << 12 {
        return Err(GroupError::BudgetExceeded(format!("{name} has order {n}")));
    }
    let digits = |mut x: usize| {
        let mut d = vec![0; orders.len()];
        for i in (0..orders.len()).rev() {
            d[i] = x % orders[i];
            x /= orders[i];
        }
        d
    };
    let index = |d: &[usize]| d.iter().zip(orders).fold(0, |acc, (&x, &o)| acc * o + x);
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let dx = digits(x);
            (0..n)
                .map(|y| {
                    let s: Vec<usize> = digits(y).iter().zip(&dx).zip(orders).map(|((a, b), o)| (a + b) % o).collect();
                    index(&s)
                })
                .collect()
        })
        .collect();
    let mut gens = Vec::new();
    let mut names = Vec::new();
    for i in 0..orders.len() {
        if orders[i] > 1 {
            let mut d = vec![0; orders.len()];
            d[i] = 1;
            gens.push(index(&d));
            names.push(((b'a' + i as u8) as char).to_string());
        }
    }
    Group::from_table_named(&name, rows, Some((gens, names)))
}

fn presented(name: &str, gens: &[&str], rels: &[&str], classes: &[usize]) -> Group {
    let pres = Presentation::new(gens, rels).expect("catalog presentation parses");
    let g = Group::from_presentation_named(name, &pres, 10_000).expect("catalog presentation enumerates");
    let mut sizes = g.conjugacy().class_sizes.clone();
    sizes.sort_unstable();
    assert_eq!(sizes, classes, "class sizes of {name}");
    g
}

/// Looks up a catalog group, or builds any product of cyclic groups written `C2xC4`.
pub fn group_by_name(name: &str) -> Result<Group, GroupError> {
    let g = match name {
        "D4" => presented("D4", &["a", "b"], &["a^4", "b^2", "b a b^-1 a"], &[1, 1, 2, 2, 2]),
        "Q8" => presented("Q8", &["a", "b"], &["a^4", "a^2 b^-2", "b a b^-1 a"], &[1, 1, 2, 2, 2]),
        "S3" => presented("S3", &["a", "b"], &["a^3", "b^2", "a b a b"], &[1, 2, 3]),
        "Heis3" => {
            let comm = "a b a^-1 b^-1";
            let comm_inv = "b a b^-1 a^-1";
            let r3 = format!("{comm} {comm} {comm}");
            let ra = format!("a {comm} a^-1 {comm_inv}");
            let rb = format!("b {comm} b^-1 {comm_inv}");
            let mut sizes = vec![1; 3];
            sizes.extend([3; 8]);
            presented("Heis3", &["a", "b"], &["a^3", "b^3", &r3, &ra, &rb], &sizes)
        }
        _ => {
            let orders = parse_cyclic_product(name).ok_or_else(|| GroupError::UnknownGroup(name.to_string()))?;
            abelian_product(&orders)?
        }
    };
    Ok(g)
}
