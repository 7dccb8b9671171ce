//! Finite groups given by Cayley tables.
//!
//! Every group is stored as a dense multiplication table over element indices
//! `0..order`, with the identity always at index 0. Conjugacy classes are
//! computed once at construction; testers and oracles read them constantly.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GroupError;

/// Default cap on the order of groups produced by [`builtin`].
pub const DEFAULT_ORDER_CAP: usize = 2048;

/// Tables up to this order are checked for associativity exhaustively.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 512;

/// An element of a [`FiniteGroup`], by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(usize);

impl Element {
    pub const IDENTITY: Element = Element(0);

    /// Unchecked; callers guarantee `index < order`.
    pub(crate) const fn new(index: usize) -> Element {
        Element(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major: `mul[x * order + y]` is `x·y`.
    mul: Vec<usize>,
    inv: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table and builds the group.
    ///
    /// The identity is relabelled to index 0 by swapping it with whatever
    /// element held that index; all other indices are kept.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("table is empty".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!(
                    "row {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (y, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::InvalidTable(format!(
                        "entry ({x}, {y}) = {v} is out of range for order {n}"
                    )));
                }
            }
            mul.extend_from_slice(row);
        }
        Self::from_flat_table(n, mul)
    }

    pub(crate) fn from_flat_table(n: usize, mut mul: Vec<usize>) -> Result<Self, GroupError> {
        debug_assert_eq!(mul.len(), n * n);
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e * n + x] == x && mul[x * n + e] == x))
            .ok_or_else(|| GroupError::NotAGroup("no two-sided identity element".into()))?;

        if identity != 0 {
            let swap = |v: usize| match v {
                v if v == identity => 0,
                0 => identity,
                v => v,
            };
            let mut relabelled = vec![0; n * n];
            for x in 0..n {
                for y in 0..n {
                    relabelled[swap(x) * n + swap(y)] = swap(mul[x * n + y]);
                }
            }
            mul = relabelled;
        }

        let mut inv = vec![usize::MAX; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| mul[x * n + y] == 0 && mul[y * n + x] == 0)
                .ok_or_else(|| GroupError::NotAGroup(format!("element {x} has no inverse")))?;
            inv[x] = y;
        }

        check_associativity(n, &mul)?;

        let (classes, class_of) = conjugacy_classes(n, &mul, &inv);
        Ok(FiniteGroup {
            order: n,
            mul,
            inv,
            classes,
            class_of,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    /// Returns `Some` when `index < order`.
    pub fn element(&self, index: usize) -> Option<Element> {
        (index < self.order).then_some(Element(index))
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = Element> + Clone {
        (0..self.order).map(Element)
    }

    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        Element(self.mul[x.0 * self.order + y.0])
    }

    #[inline]
    pub fn inv(&self, x: Element) -> Element {
        Element(self.inv[x.0])
    }

    /// `y·x·y⁻¹`.
    #[inline]
    pub fn conjugate(&self, x: Element, by: Element) -> Element {
        self.mul(self.mul(by, x), self.inv(by))
    }

    /// Cayley table row `x`, as raw indices.
    pub fn row(&self, x: Element) -> &[usize] {
        &self.mul[x.0 * self.order..(x.0 + 1) * self.order]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// Conjugacy classes, ordered by smallest member; class 0 is `{identity}`.
    /// Members of each class are sorted.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class_of(&self, x: Element) -> usize {
        self.class_of[x.0]
    }

    pub fn class_members(&self, class: usize) -> impl ExactSizeIterator<Item = Element> + '_ {
        self.classes[class].iter().map(|&i| Element(i))
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }

    /// `|{z : z·x·z⁻¹ = y}|`, by exhaustive scan.
    pub fn conjugation_fiber_size(&self, x: Element, y: Element) -> usize {
        self.elements().filter(|&z| self.conjugate(x, z) == y).count()
    }

    /// A uniformly random element.
    pub fn uniform_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        Element(rng.random_range(0..self.order))
    }

    /// Text form of the `.grp` format: the order, then one table row per line.
    pub fn to_grp_string(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for row in self.mul.chunks(self.order) {
            let line: Vec<String> = row.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the `.grp` format. Blank lines and `#` comments are skipped;
    /// errors carry 1-based line numbers.
    pub fn from_grp_str(text: &str) -> Result<Self, GroupError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines.next().ok_or(GroupError::Parse {
            line: 1,
            message: "missing order line".into(),
        })?;
        let n: usize = header.parse().map_err(|_| GroupError::Parse {
            line: line_no,
            message: format!("expected group order, found {header:?}"),
        })?;
        if n == 0 {
            return Err(GroupError::Parse {
                line: line_no,
                message: "group order must be positive".into(),
            });
        }
        let mut table = Vec::with_capacity(n);
        for (line_no, line) in lines.by_ref() {
            if table.len() == n {
                return Err(GroupError::Parse {
                    line: line_no,
                    message: format!("unexpected content after {n} table rows"),
                });
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| GroupError::Parse {
                        line: line_no,
                        message: format!("invalid element index {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != n {
                return Err(GroupError::Parse {
                    line: line_no,
                    message: format!("row has {} entries, expected {n}", row.len()),
                });
            }
            if let Some(bad) = row.iter().find(|&&v| v >= n) {
                return Err(GroupError::Parse {
                    line: line_no,
                    message: format!("element index {bad} out of range for order {n}"),
                });
            }
            table.push(row);
        }
        if table.len() != n {
            return Err(GroupError::Parse {
                line: text.lines().count().max(1),
                message: format!("expected {n} table rows, found {}", table.len()),
            });
        }
        Self::from_cayley_table(&table)
    }
}

fn check_associativity(n: usize, mul: &[usize]) -> Result<(), GroupError> {
    let check = |x: usize, y: usize, z: usize| -> Result<(), GroupError> {
        let left = mul[mul[x * n + y] * n + z];
        let right = mul[x * n + mul[y * n + z]];
        if left == right {
            Ok(())
        } else {
            Err(GroupError::NotAGroup(format!(
                "associativity fails for ({x}, {y}, {z}): (xy)z = {left}, x(yz) = {right}"
            )))
        }
    };
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    check(x, y, z)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15 ^ n as u64);
        for _ in 0..10 * n * n {
            check(
                rng.random_range(0..n),
                rng.random_range(0..n),
                rng.random_range(0..n),
            )?;
        }
    }
    Ok(())
}

fn conjugacy_classes(n: usize, mul: &[usize], inv: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for z in 0..n {
            let c = mul[mul[z * n + x] * n + inv[z]];
            if class_of[c] == usize::MAX {
                class_of[c] = id;
                members.push(c);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    (classes, class_of)
}

/// Builtin group families, with frozen element orderings:
///
/// * `Cyclic(n)`: element `k` is `k mod n`.
/// * `BooleanCube(n)`: element `k` is the bit vector of `k` (binary counting
///   order), multiplication is XOR.
/// * `Dihedral(n)`: order `2n`; element `k < n` is the rotation `r^k`,
///   element `n + k` is `s·r^k`, with `r^n = s^2 = 1` and `r·s = s·r⁻¹`.
/// * `Symmetric(n)`: permutations of `0..n` in lexicographic one-line
///   notation; `(σ·τ)(i) = σ(τ(i))`.
/// * `Quaternion`: `1, −1, i, −i, j, −j, k, −k`.
/// * `Product(G, H)`: pair `(g, h)` has index `g·|H| + h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    Cyclic(usize),
    BooleanCube(usize),
    Dihedral(usize),
    Symmetric(usize),
    Quaternion,
    Product(Box<Builtin>, Box<Builtin>),
}

impl Builtin {
    pub fn order(&self) -> Option<usize> {
        match self {
            Builtin::Cyclic(n) => Some(*n),
            Builtin::BooleanCube(n) => u32::try_from(*n).ok().and_then(|n| 1usize.checked_shl(n)),
            Builtin::Dihedral(n) => n.checked_mul(2),
            Builtin::Symmetric(n) => (1..=*n).try_fold(1usize, |acc, k| acc.checked_mul(k)),
            Builtin::Quaternion => Some(8),
            Builtin::Product(a, b) => a.order()?.checked_mul(b.order()?),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        self.build_with_cap(DEFAULT_ORDER_CAP)
    }

    pub fn build_with_cap(&self, cap: usize) -> Result<FiniteGroup, GroupError> {
        match self.order() {
            Some(0) => Err(GroupError::InvalidTable(format!("{self} has no elements"))),
            Some(n) if n <= cap => {
                let table = self.flat_table();
                FiniteGroup::from_flat_table(n, table)
            }
            order => Err(GroupError::OrderCapExceeded {
                order: order.unwrap_or(usize::MAX),
                cap,
            }),
        }
    }

    fn flat_table(&self) -> Vec<usize> {
        match self {
            Builtin::Cyclic(n) => {
                let n = *n;
                (0..n * n).map(|i| (i / n + i % n) % n).collect()
            }
            Builtin::BooleanCube(bits) => {
                let n = 1usize << bits;
                (0..n * n).map(|i| (i / n) ^ (i % n)).collect()
            }
            Builtin::Dihedral(n) => {
                let n = *n;
                let m = 2 * n;
                let decode = |e: usize| (e / n, e % n);
                let mut table = vec![0; m * m];
                for x in 0..m {
                    for y in 0..m {
                        let (a, b) = decode(x);
                        let (c, d) = decode(y);
                        // s^a r^b s^c r^d = s^(a+c) r^((-1)^c b + d)
                        let rot = if c == 0 { (b + d) % n } else { (n - b + d) % n };
                        table[x * m + y] = ((a + c) % 2) * n + rot;
                    }
                }
                table
            }
            Builtin::Symmetric(k) => symmetric_table(*k),
            Builtin::Quaternion => quaternion_table(),
            Builtin::Product(a, b) => {
                let ta = a.flat_table();
                let tb = b.flat_table();
                let na = a.order().unwrap_or(0);
                let nb = b.order().unwrap_or(0);
                let n = na * nb;
                let mut table = vec![0; n * n];
                for x in 0..n {
                    for y in 0..n {
                        let (g1, h1) = (x / nb, x % nb);
                        let (g2, h2) = (y / nb, y % nb);
                        table[x * n + y] = ta[g1 * na + g2] * nb + tb[h1 * nb + h2];
                    }
                }
                table
            }
        }
    }
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations_lex(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        out.push(perm.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out
}

fn symmetric_table(k: usize) -> Vec<usize> {
    let perms = permutations_lex(k);
    let n = perms.len();
    let index: std::collections::HashMap<Vec<usize>, usize> =
        perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut table = vec![0; n * n];
    for (x, sigma) in perms.iter().enumerate() {
        for (y, tau) in perms.iter().enumerate() {
            let prod: Vec<usize> = tau.iter().map(|&t| sigma[t]).collect();
            table[x * n + y] = index[&prod];
        }
    }
    table
}

fn quaternion_table() -> Vec<usize> {
    // Units 1, i, j, k as (basis index), sign separately.
    // basis products: e_a * e_b = sign * e_c
    const BASIS: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let decode = |e: usize| (if e % 2 == 0 { 1i8 } else { -1i8 }, e / 2);
    let encode = |sign: i8, b: usize| 2 * b + usize::from(sign < 0);
    let mut table = vec![0; 64];
    for x in 0..8 {
        for y in 0..8 {
            let (sx, bx) = decode(x);
            let (sy, by) = decode(y);
            let (s, b) = BASIS[bx][by];
            table[x * 8 + y] = encode(sx * sy * s, b);
        }
    }
    table
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Cyclic(n) => write!(f, "cyclic:{n}"),
            Builtin::BooleanCube(n) => write!(f, "boolean_cube:{n}"),
            Builtin::Dihedral(n) => write!(f, "dihedral:{n}"),
            Builtin::Symmetric(n) => write!(f, "symmetric:{n}"),
            Builtin::Quaternion => write!(f, "quaternion"),
            Builtin::Product(a, b) => write!(f, "product:{a},{b}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = GroupError;

    /// Accepts `family[:param]` with an optional leading `builtin:`.
    /// `product:A,B` splits at the first comma, so nesting is right-associative.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s.strip_prefix("builtin:").unwrap_or(s);
        let unknown = || GroupError::UnknownBuiltin(s.to_string());
        let (family, rest) = match s.split_once(':') {
            Some((fam, rest)) => (fam, Some(rest)),
            None => (s, None),
        };
        let param = || -> Result<usize, GroupError> {
            rest.and_then(|r| r.parse().ok()).ok_or_else(unknown)
        };
        match family {
            "cyclic" => Ok(Builtin::Cyclic(param()?)),
            "boolean_cube" => Ok(Builtin::BooleanCube(param()?)),
            "dihedral" => Ok(Builtin::Dihedral(param()?)),
            "symmetric" => Ok(Builtin::Symmetric(param()?)),
            "quaternion" if rest.is_none() => Ok(Builtin::Quaternion),
            "product" | "direct_product" => {
                let (a, b) = rest.and_then(|r| r.split_once(',')).ok_or_else(unknown)?;
                Ok(Builtin::Product(Box::new(a.parse()?), Box::new(b.parse()?)))
            }
            _ => Err(unknown()),
        }
    }
}

/// Builds a builtin group from its name and parameter list.
pub fn builtin(family: &str, params: &[usize]) -> Result<FiniteGroup, GroupError> {
    let spec = match (family, params) {
        ("cyclic", [n]) => Builtin::Cyclic(*n),
        ("boolean_cube", [n]) => Builtin::BooleanCube(*n),
        ("dihedral", [n]) => Builtin::Dihedral(*n),
        ("symmetric", [n]) => Builtin::Symmetric(*n),
        ("quaternion", []) => Builtin::Quaternion,
        _ => return Err(GroupError::UnknownBuiltin(format!("{family}{params:?}"))),
    };
    spec.build()
}
