//! Table constructors for the ring-spec language.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::dsl::{InvolutionKind, RawSource, RingExpr, RingSpec};
use crate::ring::{FinRing, Layout, RingError, RingTables};

pub fn zmod(n: usize) -> Result<FinRing, RingError> {
    if n == 0 {
        return Err(RingError::InvalidArgument("zmod needs n >= 1".into()));
    }
    let mut add = vec![0u32; n * n];
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            add[a * n + b] = ((a + b) % n) as u32;
            mul[a * n + b] = ((a * b) % n) as u32;
        }
    }
    FinRing::from_tables(format!("zmod({n})"), RingTables { order: n, add, mul, star: None })
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p); little-endian coefficients.
fn poly_rem(mut a: Vec<usize>, m: &[usize], p: usize) -> Vec<usize> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - (lead * c) % p) % p;
            }
        }
    }
    a
}

fn monic_polys(p: usize, degree: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = p.pow(degree as u32);
    (0..count).map(move |mut v| {
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            coeffs.push(v % p);
            v /= p;
        }
        coeffs.push(1);
        coeffs
    })
}

/// Lexicographically smallest monic irreducible polynomial of `degree` over GF(p),
/// comparing coefficients from `x^(degree-1)` down to the constant term.
pub fn smallest_irreducible(p: usize, degree: usize) -> Vec<usize> {
    monic_polys(p, degree)
        .find(|f| {
            (1..=degree / 2).all(|d| {
                monic_polys(p, d).all(|g| poly_rem(f.clone(), &g, p).iter().any(|&c| c != 0))
            })
        })
        .expect("an irreducible polynomial of every degree exists")
}

/// `(p, k)` with `q = p^k`, `p` prime.
fn prime_power(q: usize) -> Option<(usize, usize)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// GF(p^k) as GF(p)[x] / (f). Element index is `Σ c_i p^i`.
///
/// With `k = 1`, a prime power `p = q^j` is read as the field of order `p`.
pub fn gf(p: usize, k: usize, cap: usize) -> Result<FinRing, RingError> {
    if k == 1 && !is_prime(p) {
        if let Some((q, j)) = prime_power(p) {
            return gf(q, j, cap).map(|r| r.with_label(format!("gf({p})")));
        }
    }
    if !is_prime(p) {
        return Err(RingError::NonPrimeCharacteristic(p));
    }
    if k == 0 {
        return Err(RingError::InvalidArgument("gf needs k >= 1".into()));
    }
    let order = checked_pow(p as u128, k as u32, cap)?;
    let modulus = smallest_irreducible(p, k);
    let decode = |mut v: usize| -> Vec<usize> {
        (0..k)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    };
    let encode = |c: &[usize]| c.iter().rev().fold(0, |acc, &x| acc * p + x);
    let elems: Vec<Vec<usize>> = (0..order).map(decode).collect();
    let mut add = vec![0u32; order * order];
    let mut mul = vec![0u32; order * order];
    for a in 0..order {
        for b in 0..order {
            let s: Vec<usize> = (0..k).map(|i| (elems[a][i] + elems[b][i]) % p).collect();
            add[a * order + b] = encode(&s) as u32;
            let mut prod = vec![0usize; 2 * k - 1];
            for i in 0..k {
                for j in 0..k {
                    prod[i + j] = (prod[i + j] + elems[a][i] * elems[b][j]) % p;
                }
            }
            let mut r = poly_rem(prod, &modulus, p);
            r.resize(k, 0);
            mul[a * order + b] = encode(&r) as u32;
        }
    }
    let label = if k == 1 { format!("gf({p})") } else { format!("gf({p}, {k})") };
    FinRing::from_tables(label, RingTables { order, add, mul, star: None })
}

fn checked_pow(base: u128, exp: u32, cap: usize) -> Result<usize, RingError> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
        if acc > cap as u128 {
            return Err(RingError::SizeBudgetExceeded { order: acc, cap });
        }
    }
    Ok(acc as usize)
}

/// Matrix-shaped ring over `base`, full or upper triangular.
fn matrix_like(
    base: &FinRing,
    size: usize,
    upper: bool,
    cap: usize,
) -> Result<FinRing, RingError> {
    if size == 0 {
        return Err(RingError::InvalidArgument("matrix size must be >= 1".into()));
    }
    let positions: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (0..size).map(move |j| (i, j)))
        .filter(|&(i, j)| !upper || i <= j)
        .collect();
    let b = base.order();
    let m = positions.len();
    let order = checked_pow(b as u128, m as u32, cap)?;
    let slot: HashMap<(usize, usize), usize> =
        positions.iter().enumerate().map(|(s, &p)| (p, s)).collect();

    let decode = |mut v: usize| -> Vec<usize> {
        let mut e = vec![0usize; m];
        for s in (0..m).rev() {
            e[s] = v % b;
            v /= b;
        }
        e
    };
    let encode = |e: &[usize]| e.iter().fold(0usize, |acc, &x| acc * b + x);
    let entries: Vec<Vec<usize>> = (0..order).map(decode).collect();
    // terms[s] lists the slot pairs (i,l), (l,j) contributing to entry s of a product.
    let terms: Vec<Vec<(usize, usize)>> = positions
        .iter()
        .map(|&(i, j)| {
            (0..size)
                .filter_map(|l| Some((*slot.get(&(i, l))?, *slot.get(&(l, j))?)))
                .collect()
        })
        .collect();

    let mut add = vec![0u32; order * order];
    let mut mul = vec![0u32; order * order];
    let mut buf = vec![0usize; m];
    for x in 0..order {
        let ex = &entries[x];
        for y in 0..order {
            let ey = &entries[y];
            for s in 0..m {
                buf[s] = base.add(ex[s], ey[s]);
            }
            add[x * order + y] = encode(&buf) as u32;
            for (s, pairs) in terms.iter().enumerate() {
                buf[s] = pairs
                    .iter()
                    .fold(base.zero(), |acc, &(a, c)| base.add(acc, base.mul(ex[a], ey[c])));
            }
            mul[x * order + y] = encode(&buf) as u32;
        }
    }
    let base_star = base.star_table().map(|s| s.to_vec());
    let (label, layout) = if upper {
        (
            format!("uppertri({}, {size})", base.label()),
            Layout::UpperTri { base_order: b, size, base_star },
        )
    } else {
        (
            format!("matrix({}, {size})", base.label()),
            Layout::Matrix { base_order: b, size, base_star },
        )
    };
    FinRing::from_tables_with_layout(label, RingTables { order, add, mul, star: None }, layout)
}

pub fn matrix(base: &FinRing, size: usize, cap: usize) -> Result<FinRing, RingError> {
    matrix_like(base, size, false, cap)
}

pub fn uppertri(base: &FinRing, size: usize, cap: usize) -> Result<FinRing, RingError> {
    matrix_like(base, size, true, cap)
}

pub fn product(a: &FinRing, b: &FinRing, cap: usize) -> Result<FinRing, RingError> {
    let (na, nb) = (a.order(), b.order());
    let order = (na as u128) * (nb as u128);
    if order > cap as u128 {
        return Err(RingError::SizeBudgetExceeded { order, cap });
    }
    let order = order as usize;
    let mut add = vec![0u32; order * order];
    let mut mul = vec![0u32; order * order];
    for x in 0..order {
        let (xa, xb) = (x / nb, x % nb);
        for y in 0..order {
            let (ya, yb) = (y / nb, y % nb);
            add[x * order + y] = (a.add(xa, ya) * nb + b.add(xb, yb)) as u32;
            mul[x * order + y] = (a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32;
        }
    }
    let equal_factors = na == nb && a.tables().add == b.tables().add && a.tables().mul == b.tables().mul;
    FinRing::from_tables_with_layout(
        format!("product({}, {})", a.label(), b.label()),
        RingTables { order, add, mul, star: None },
        Layout::Product { left_order: na, right_order: nb, equal_factors },
    )
}

/// Attach an involution and re-validate its axioms.
pub fn attach_involution(ring: FinRing, kind: &InvolutionKind) -> Result<FinRing, RingError> {
    let n = ring.order();
    let star: Vec<u32> = match kind {
        InvolutionKind::Identity => {
            if let Some((a, b)) = ring.noncommuting_pair() {
                return Err(RingError::BadInvolution { law: "(ab)* = b*a*", witness: [a, b] });
            }
            (0..n as u32).collect()
        }
        InvolutionKind::Transpose => match ring.layout() {
            Layout::Matrix { base_order, size, base_star } => {
                transpose_table(n, *base_order, *size, false, base_star.as_deref())
            }
            Layout::UpperTri { base_order, size, base_star } => {
                transpose_table(n, *base_order, *size, true, base_star.as_deref())
            }
            _ => {
                return Err(RingError::InvolutionUnsupported {
                    kind: "transpose",
                    reason: format!("{} is not built by matrix or uppertri", ring.label()),
                })
            }
        },
        InvolutionKind::Swap => match ring.layout() {
            Layout::Product { left_order, right_order, equal_factors: true } => (0..n)
                .map(|x| ((x % right_order) * left_order + x / right_order) as u32)
                .collect(),
            _ => {
                return Err(RingError::InvolutionUnsupported {
                    kind: "swap",
                    reason: format!("{} is not product(A, A)", ring.label()),
                })
            }
        },
        InvolutionKind::Raw(table) => table.clone(),
    };
    ring.with_star(star)
}

/// Transpose (full matrices) or reflection in the anti-diagonal (upper
/// triangular), applying the base involution entrywise when present.
fn transpose_table(
    n: usize,
    b: usize,
    size: usize,
    upper: bool,
    base_star: Option<&[u32]>,
) -> Vec<u32> {
    let positions: Vec<(usize, usize)> = (0..size)
        .flat_map(|i| (0..size).map(move |j| (i, j)))
        .filter(|&(i, j)| !upper || i <= j)
        .collect();
    let m = positions.len();
    let slot: HashMap<(usize, usize), usize> =
        positions.iter().enumerate().map(|(s, &p)| (p, s)).collect();
    let source: Vec<usize> = positions
        .iter()
        .map(|&(i, j)| if upper { slot[&(size - 1 - j, size - 1 - i)] } else { slot[&(j, i)] })
        .collect();
    (0..n)
        .map(|mut v| {
            let mut e = vec![0usize; m];
            for s in (0..m).rev() {
                e[s] = v % b;
                v /= b;
            }
            let t: Vec<usize> = source
                .iter()
                .map(|&src| base_star.map_or(e[src], |st| st[e[src]] as usize))
                .collect();
            t.iter().fold(0usize, |acc, &x| acc * b + x) as u32
        })
        .collect()
}

/// Named rings available to `Ref` nodes, plus the directory raw files resolve against.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    pub rings: HashMap<String, Arc<FinRing>>,
    pub base_dir: Option<PathBuf>,
}

impl Environment {
    pub fn with_base_dir(dir: impl AsRef<Path>) -> Self {
        Environment { rings: HashMap::new(), base_dir: Some(dir.as_ref().to_path_buf()) }
    }
}

pub fn construct_expr(expr: &RingExpr, env: &Environment, cap: usize) -> Result<FinRing, RingError> {
    let ring = match expr {
        RingExpr::Zmod(n) => {
            if *n > cap {
                return Err(RingError::SizeBudgetExceeded { order: *n as u128, cap });
            }
            zmod(*n)?
        }
        RingExpr::Gf { p, k } => gf(*p, *k, cap)?,
        RingExpr::Matrix(base, k) => matrix(&construct_expr(base, env, cap)?, *k, cap)?,
        RingExpr::UpperTri(base, k) => uppertri(&construct_expr(base, env, cap)?, *k, cap)?,
        RingExpr::Product(a, b) => {
            product(&construct_expr(a, env, cap)?, &construct_expr(b, env, cap)?, cap)?
        }
        RingExpr::Opposite(a) => construct_expr(a, env, cap)?.opposite(),
        RingExpr::Raw(src) => {
            let tables = match src {
                RawSource::Inline(t) => (**t).clone(),
                RawSource::File(path) => {
                    let full = match &env.base_dir {
                        Some(dir) => dir.join(path),
                        None => PathBuf::from(path),
                    };
                    crate::dsl::read_raw_tables(&full)?
                }
            };
            if tables.order > cap {
                return Err(RingError::SizeBudgetExceeded { order: tables.order as u128, cap });
            }
            FinRing::from_tables(expr.to_string(), tables)?
        }
        RingExpr::Ref(name) => {
            let ring = env.rings.get(name).ok_or_else(|| RingError::UnknownRing(name.clone()))?;
            return Ok((**ring).clone());
        }
    };
    Ok(ring.with_label(expr.to_string()))
}

/// Build the ring a spec denotes. Deterministic: the same spec yields identical tables.
pub fn construct(spec: &RingSpec, env: &Environment, cap: usize) -> Result<FinRing, RingError> {
    let ring = construct_expr(&spec.expr, env, cap)?;
    match &spec.involution {
        Some(kind) => attach_involution(ring, kind),
        None => Ok(ring),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;

    fn build(text: &str) -> Result<FinRing, RingError> {
        construct(&parse_spec(text).unwrap(), &Environment::default(), 4096)
    }

    #[test]
    fn orders_of_standard_constructors() {
        assert_eq!(build("zmod(4)").unwrap().order(), 4);
        assert_eq!(build("uppertri(zmod(2), 2)").unwrap().order(), 8);
        assert_eq!(build("matrix(zmod(2), 2)").unwrap().order(), 16);
        assert_eq!(build("gf(3, 2)").unwrap().order(), 9);
        assert_eq!(build("product(zmod(2), zmod(3))").unwrap().order(), 6);
    }

    #[test]
    fn smallest_irreducibles() {
        // x^2 + x + 1 over GF(2); x^2 + 1 over GF(3); x^3 + x + 1 over GF(2).
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(5, 1), vec![0, 1]);
    }

    #[test]
    fn gf4_is_a_field() {
        let f = build("gf(2, 2)").unwrap();
        for a in 1..4 {
            assert!((1..4).any(|b| f.mul(a, b) == f.one()));
        }
        // x * x = x + 1
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn gf_rejects_composite() {
        assert_eq!(build("gf(6)").unwrap_err(), RingError::NonPrimeCharacteristic(6));
        assert_eq!(build("gf(4, 2)").unwrap_err(), RingError::NonPrimeCharacteristic(4));
    }

    #[test]
    fn gf_of_a_prime_power_is_the_field() {
        assert_eq!(build("gf(4)").unwrap().tables(), build("gf(2, 2)").unwrap().tables());
        assert_eq!(build("gf(9)").unwrap().tables(), build("gf(3, 2)").unwrap().tables());
    }

    #[test]
    fn order_cap_is_an_error() {
        let spec = parse_spec("matrix(gf(3), 3)").unwrap();
        assert!(matches!(
            construct(&spec, &Environment::default(), 4096),
            Err(RingError::SizeBudgetExceeded { .. })
        ));
        let spec = parse_spec("zmod(10)").unwrap();
        assert!(matches!(
            construct(&spec, &Environment::default(), 8),
            Err(RingError::SizeBudgetExceeded { .. })
        ));
    }

    #[test]
    fn matrix_indexing_is_row_major() {
        let m = build("matrix(zmod(2), 2)").unwrap();
        // E11 = 1000b = 8, E12 = 0100b = 4, E21 = 2, E22 = 1, identity = 9.
        assert_eq!(m.one(), 9);
        assert_eq!(m.mul(8, 4), 4);
        assert_eq!(m.mul(4, 8), 0);
    }

    #[test]
    fn involutions() {
        assert!(build("ring A = zmod(6) with involution identity").unwrap().has_star());
        assert!(build("ring Q = matrix(zmod(3), 2) with involution transpose").is_ok());
        assert!(build("ring T = uppertri(gf(2), 2) with involution transpose").is_ok());
        assert!(build("ring P = product(gf(2), gf(2)) with involution swap").is_ok());
        match build("ring B = matrix(zmod(2), 2) with involution identity") {
            Err(RingError::BadInvolution { witness: [a, b], .. }) => {
                let m = build("matrix(zmod(2), 2)").unwrap();
                assert_ne!(m.mul(a, b), m.mul(b, a));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            build("ring C = zmod(4) with involution transpose"),
            Err(RingError::InvolutionUnsupported { .. })
        ));
        assert!(matches!(
            build("ring D = product(gf(2), gf(3)) with involution swap"),
            Err(RingError::InvolutionUnsupported { .. })
        ));
    }

    #[test]
    fn references_resolve_through_environment() {
        let mut env = Environment::default();
        env.rings.insert("S".into(), Arc::new(build("uppertri(gf(2), 2)").unwrap()));
        let r = construct(&parse_spec("uppertri(S, 2)").unwrap(), &env, 4096).unwrap();
        assert_eq!(r.order(), 512);
        assert!(matches!(
            construct(&parse_spec("matrix(T, 2)").unwrap(), &env, 4096),
            Err(RingError::UnknownRing(_))
        ));
    }
}
