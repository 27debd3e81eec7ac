use serde::{Deserialize, Serialize};

use super::{FiniteGroup, DEFAULT_GROUP_CAP};
use crate::error::{Error, Result};

/// Group input document.
///
/// ```json
/// {"table": [[0,1],[1,0]]}
/// {"perm": {"degree": 3, "generators": [[1,0,2],[1,2,0]]}}
/// {"named": "S3"}
/// {"product": [{"named": "C2"}, {"named": "C3"}]}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupSpec {
    Table(Vec<Vec<usize>>),
    Perm { degree: usize, generators: Vec<Vec<usize>> },
    Named(String),
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Table(t) => FiniteGroup::from_table(t, "table"),
            GroupSpec::Perm { degree, generators } => FiniteGroup::from_permutations(*degree, generators),
            GroupSpec::Named(name) => named_group(name),
            GroupSpec::Product(a, b) => {
                let (a, b) = (a.build()?, b.build()?);
                let prod = FiniteGroup::direct_product(&a, &b)?;
                if prod.order() > DEFAULT_GROUP_CAP {
                    return Err(Error::OrderCapExceeded {
                        what: prod.label().to_string(),
                        order: prod.order(),
                        cap: DEFAULT_GROUP_CAP,
                    });
                }
                Ok(prod)
            }
        }
    }

    /// Parses a command-line group argument: a JSON document if it starts
    /// with `{`, otherwise a group name.
    pub fn parse_arg(arg: &str) -> Result<GroupSpec> {
        let arg = arg.trim();
        if arg.starts_with('{') {
            Ok(serde_json::from_str(arg)?)
        } else {
            Ok(GroupSpec::Named(arg.to_string()))
        }
    }
}

fn parse_param(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(rest);
    inner.trim().parse().ok()
}

fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidInput(format!("dihedral group order must be even, got {n}")));
    }
    if n > DEFAULT_GROUP_CAP {
        return Err(Error::OrderCapExceeded {
            what: format!("D({n})"),
            order: n,
            cap: DEFAULT_GROUP_CAP,
        });
    }
    // r^a s^b at index a + m*b.
    let m = n / 2;
    let mut table = vec![vec![0; n]; n];
    for (x, row) in table.iter_mut().enumerate() {
        let (a1, b1) = (x % m, x / m);
        for (y, entry) in row.iter_mut().enumerate() {
            let (a2, b2) = (y % m, y / m);
            let a = if b1 == 0 { (a1 + a2) % m } else { (a1 + m - a2) % m };
            *entry = a + m * ((b1 + b2) % 2);
        }
    }
    FiniteGroup::from_table(&table, format!("D{n}"))
}

fn quaternion() -> FiniteGroup {
    // sign * 4 + unit, units 1, i, j, k.
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let table: Vec<Vec<usize>> = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (s, u) = UNIT[x % 4][y % 4];
                    ((s + x / 4 + y / 4) % 2) * 4 + u
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table, "Q8").expect("Q8 table")
}

fn symmetric(n: usize) -> Result<FiniteGroup> {
    let g = if n <= 1 {
        FiniteGroup::from_permutations(n.max(1), &[])?
    } else {
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        FiniteGroup::from_permutations(n, &[swap, cycle])?
    };
    Ok(g.with_label(format!("S{n}")))
}

/// Built-in groups: `C1`/`1`, `C<n>`/`C(n)`, `D<n>`/`D(n)` (dihedral of
/// order `n`), `S<n>`/`S(n)`, `A4`, `Q8`, `V4`, and `AxB` products.
pub fn named_group(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    if let Some((a, b)) = name.split_once(['x', '*']) {
        let (a, b) = (named_group(a)?, named_group(b)?);
        let prod = FiniteGroup::direct_product(&a, &b)?;
        if prod.order() > DEFAULT_GROUP_CAP {
            return Err(Error::OrderCapExceeded {
                what: name.to_string(),
                order: prod.order(),
                cap: DEFAULT_GROUP_CAP,
            });
        }
        return Ok(prod.with_label(format!("{}x{}", a.label(), b.label())));
    }
    match name {
        "1" | "C1" | "1x1" => return Ok(FiniteGroup::trivial()),
        "Q8" => return Ok(quaternion()),
        "V4" => {
            let c2 = FiniteGroup::cyclic(2)?;
            return Ok(FiniteGroup::direct_product(&c2, &c2)?.with_label("C2xC2"));
        }
        "A4" => {
            let g = FiniteGroup::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])?;
            return Ok(g.with_label("A4"));
        }
        _ => {}
    }
    if let Some(n) = parse_param(name, 'C') {
        return if n == 1 { Ok(FiniteGroup::trivial()) } else { FiniteGroup::cyclic(n) };
    }
    if let Some(n) = parse_param(name, 'D') {
        return dihedral(n);
    }
    if let Some(n) = parse_param(name, 'S') {
        return symmetric(n);
    }
    Err(Error::InvalidInput(format!("unknown group name {name:?}")))
}
