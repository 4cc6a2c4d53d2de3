//! Integer lattice reductions behind module presentations.
//!
//! [`diagonalize`] brings a relation matrix to diagonal form by unimodular row
//! and column operations and keeps the column transform, which is what turns
//! generator coordinates into cyclic coordinates. [`index_mod`] computes the
//! index of a lattice containing `e·ℤⁿ` from an echelon form over `ℤ/e`; it
//! shares no code with [`diagonalize`] and serves as its cross-check.

pub type Mat = Vec<Vec<i128>>;

/// Cyclic decomposition of `ℤ^g / (row span)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonal {
    /// order of each new coordinate; 0 means infinite cyclic
    pub orders: Vec<u64>,
    /// `g × g`, generator coordinates `x` become `x·q`
    pub q: Mat,
    /// `q⁻¹`; row `c` is coordinate `c`'s basis vector in generator coordinates
    pub q_inv: Mat,
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn reduce(x: i128, modulus: Option<i128>) -> i128 {
    match modulus {
        Some(m) => x.rem_euclid(m),
        None => x,
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Diagonalizes `rows` (each of length `gens`). With `Some(e)` the lattice is
/// taken to contain `e·ℤ^g` and all arithmetic is done modulo `e`.
pub fn diagonalize(rows: &[Vec<i64>], gens: usize, modulus: Option<u64>) -> Diagonal {
    let m = modulus.map(i128::from);
    let mut a: Mat = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), gens);
            r.iter().map(|&x| reduce(i128::from(x), m)).collect()
        })
        .collect();
    a.retain(|r| r.iter().any(|&x| x != 0));
    let mut q = identity(gens);
    let mut q_inv = identity(gens);
    let n_rows = a.len();

    let swap_cols = |a: &mut Mat, q: &mut Mat, q_inv: &mut Mat, i: usize, j: usize| {
        if i != j {
            for row in a.iter_mut() {
                row.swap(i, j);
            }
            for row in q.iter_mut() {
                row.swap(i, j);
            }
            q_inv.swap(i, j);
        }
    };
    // col_c -= k·col_t
    let col_op = |a: &mut Mat, q: &mut Mat, q_inv: &mut Mat, t: usize, c: usize, k: i128| {
        for row in a.iter_mut() {
            row[c] = reduce(row[c] - k * row[t], m);
        }
        for row in q.iter_mut() {
            row[c] = reduce(row[c] - k * row[t], m);
        }
        let (rc, rt) = (q_inv[c].clone(), &mut q_inv[t]);
        for (x, y) in rt.iter_mut().zip(rc) {
            *x = reduce(*x + k * y, m);
        }
    };

    let mut pivots = Vec::new();
    let mut t = 0;
    while t < n_rows && t < gens {
        let best = (t..n_rows)
            .flat_map(|r| (t..gens).map(move |c| (r, c)))
            .filter(|&(r, c)| a[r][c] != 0)
            .min_by_key(|&(r, c)| a[r][c].abs());
        let Some((r, c)) = best else { break };
        a.swap(t, r);
        swap_cols(&mut a, &mut q, &mut q_inv, t, c);
        loop {
            let p = a[t][t];
            let mut clean = true;
            for r in t + 1..n_rows {
                if a[r][t] != 0 {
                    let k = a[r][t].div_euclid(p);
                    let (head, tail) = a.split_at_mut(r);
                    for (x, y) in tail[0].iter_mut().zip(&head[t]) {
                        *x = reduce(*x - k * y, m);
                    }
                    clean &= a[r][t] == 0;
                }
            }
            for c in t + 1..gens {
                if a[t][c] != 0 {
                    let k = a[t][c].div_euclid(p);
                    col_op(&mut a, &mut q, &mut q_inv, t, c, k);
                    clean &= a[t][c] == 0;
                }
            }
            if clean {
                break;
            }
            // a smaller remainder sits in row t or column t; make it the pivot
            let (r, c) = (t..n_rows)
                .map(|r| (r, t))
                .chain((t..gens).map(|c| (t, c)))
                .filter(|&(r, c)| a[r][c] != 0)
                .min_by_key(|&(r, c)| a[r][c].abs())
                .expect("pivot row or column is nonzero");
            a.swap(t, r);
            swap_cols(&mut a, &mut q, &mut q_inv, t, c);
        }
        pivots.push(a[t][t].unsigned_abs());
        t += 1;
    }
    let orders = (0..gens)
        .map(|c| {
            let d = pivots.get(c).map(|&d| d as u64).unwrap_or(0);
            match modulus {
                Some(e) => gcd(d, e),
                None => d,
            }
        })
        .collect();
    Diagonal { orders, q, q_inv }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// A unit `u` mod `e` with `u·a ≡ gcd(a, e)`.
fn normalizer(a: i128, e: i128) -> i128 {
    let g = ext_gcd(a, e).0;
    let (a1, e1) = (a / g, e / g);
    let inv = if e1 == 1 { 0 } else { ext_gcd(a1.rem_euclid(e1), e1).1.rem_euclid(e1) };
    let mut u = inv;
    while ext_gcd(u, e).0 != 1 {
        u += e1;
    }
    u % e
}

/// `[ℤⁿ : L]` for `L` spanned by `rows` and `e·ℤⁿ`.
pub fn index_mod(rows: impl IntoIterator<Item = Vec<i64>>, n: usize, e: u64) -> u128 {
    if e == 1 {
        return 1;
    }
    let e = i128::from(e);
    let modv = |v: Vec<i128>| -> Vec<i128> { v.into_iter().map(|x| x.rem_euclid(e)).collect() };
    let mut piv: Vec<Option<Vec<i128>>> = vec![None; n];
    let mut work: Vec<Vec<i128>> = rows.into_iter().map(|r| modv(r.into_iter().map(i128::from).collect())).collect();
    while let Some(mut v) = work.pop() {
        for c in 0..n {
            if v[c] == 0 {
                continue;
            }
            match &mut piv[c] {
                None => {
                    let u = normalizer(v[c], e);
                    v = modv(v.iter().map(|x| x * u).collect());
                    let g = v[c];
                    let extra = modv(v.iter().map(|x| x * (e / g)).collect());
                    if extra.iter().any(|&x| x != 0) {
                        work.push(extra);
                    }
                    piv[c] = Some(v);
                    break;
                }
                Some(p) => {
                    if v[c] % p[c] == 0 {
                        let k = v[c] / p[c];
                        v = modv(v.iter().zip(p.iter()).map(|(x, y)| x - k * y).collect());
                        continue;
                    }
                    let (g, s, t) = ext_gcd(p[c], v[c]);
                    let new_p = modv(p.iter().zip(&v).map(|(x, y)| s * x + t * y).collect());
                    let (pv, vv) = (p[c] / g, v[c] / g);
                    let new_v = modv(p.iter().zip(&v).map(|(x, y)| vv * x - pv * y).collect());
                    let extra = modv(new_p.iter().map(|x| x * (e / g)).collect());
                    if extra.iter().any(|&x| x != 0) {
                        work.push(extra);
                    }
                    *p = new_p;
                    v = new_v;
                }
            }
        }
    }
    piv.iter()
        .map(|p| match p {
            None => e as u128,
            Some(p) => p.iter().find(|&&x| x != 0).copied().unwrap_or(e) as u128,
        })
        .product()
}

/// Canonical invariant factors `d₁ | d₂ | ⋯` of `⊕ ℤ/oᵢ`, trivial factors
/// dropped, free summands (order 0) last.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let free = orders.iter().filter(|&&o| o == 0).count();
    // prime powers per prime, largest first
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
    for &o in orders.iter().filter(|&&o| o > 1) {
        let mut rest = o;
        let mut p = 2;
        while rest > 1 {
            if rest % p == 0 {
                let mut q = 1;
                while rest % p == 0 {
                    rest /= p;
                    q *= p;
                }
                by_prime.entry(p).or_default().push(q);
            }
            p += 1;
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    for v in by_prime.values_mut() {
        v.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut factors: Vec<u64> =
        (0..len).map(|i| by_prime.values().map(|v| v.get(i).copied().unwrap_or(1)).product()).collect();
    factors.reverse();
    factors.extend(std::iter::repeat_n(0, free));
    factors
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat_mul(a: &Mat, b: &Mat, m: Option<i128>) -> Mat {
        a.iter()
            .map(|r| (0..b[0].len()).map(|j| reduce(r.iter().zip(b).map(|(x, row)| x * row[j]).sum(), m)).collect())
            .collect()
    }

    #[test]
    fn cyclic_examples() {
        // ℤ²/(4,6) ≅ ℤ/2 ⊕ ℤ
        let d = diagonalize(&[vec![4, 6]], 2, None);
        assert_eq!(invariant_factors(&d.orders), vec![2, 0]);
        // ℤ/4 ⊗ ℤ/6: one generator, relations 4 and 6
        let d = diagonalize(&[vec![4], vec![6]], 1, None);
        assert_eq!(d.orders, vec![2]);
        assert_eq!(invariant_factors(&[2, 3]), vec![6]);
        assert_eq!(invariant_factors(&[4, 2, 1]), vec![2, 4]);
        assert_eq!(invariant_factors(&[1]), Vec::<u64>::new());
    }

    #[test]
    fn transform_is_inverse() {
        let rows = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let d = diagonalize(&rows, 3, None);
        assert_eq!(mat_mul(&d.q, &d.q_inv, None), identity(3));
        assert_eq!(invariant_factors(&d.orders), vec![2, 6, 12]);
        let d = diagonalize(&rows, 3, Some(8));
        assert_eq!(mat_mul(&d.q, &d.q_inv, Some(8)), identity(3));
        assert_eq!(invariant_factors(&d.orders), vec![2, 2, 4]);
    }

    #[test]
    fn index_examples() {
        assert_eq!(index_mod(vec![vec![2, 0], vec![0, 3]], 2, 6), 6);
        assert_eq!(index_mod(Vec::<Vec<i64>>::new(), 3, 2), 8);
        assert_eq!(index_mod(vec![vec![1, 1]], 2, 4), 4);
        assert_eq!(index_mod(vec![vec![2, 2]], 2, 4), 8);
    }

    proptest! {
        #[test]
        fn index_agrees_with_diagonal(
            e in prop::sample::select(vec![2u64, 3, 4, 6, 8, 12]),
            rows in prop::collection::vec(prop::collection::vec(-9i64..9, 3), 0..5),
        ) {
            let d = diagonalize(&rows, 3, Some(e));
            let order: u128 = d.orders.iter().map(|&o| o as u128).product();
            prop_assert_eq!(index_mod(rows.clone(), 3, e), order);
            // over ℤ with e·I appended, same orders
            let mut all = rows.clone();
            for i in 0..3 {
                let mut r = vec![0; 3];
                r[i] = e as i64;
                all.push(r);
            }
            let z = diagonalize(&all, 3, None);
            prop_assert_eq!(invariant_factors(&z.orders), invariant_factors(&d.orders));
        }
    }
}
