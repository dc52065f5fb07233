//! Brute-force reference implementations.
//!
//! Nothing here calls the fast paths it is used to check: carries are found
//! by search, equivalence by enumerating shift vectors, θ-sets and
//! elimination by explicit enumeration over plain integers.

use std::collections::BTreeSet;

use crate::arith::Params;
use crate::Int;

/// Searches `t ∈ [-bound, bound]^d` with `alpha_j = p t_j - t_{j-1}` (cyclic).
pub fn brute_force_carries(alpha: &[Int], p: Int, bound: Int) -> Option<Vec<Int>> {
    let d = alpha.len();
    let mut t = vec![-bound; d];
    loop {
        if (0..d).all(|j| alpha[j] == p * t[j] - t[(j + d - 1) % d]) {
            return Some(t);
        }
        let mut j = 0;
        loop {
            if j == d {
                return None;
            }
            t[j] += 1;
            if t[j] <= bound {
                break;
            }
            t[j] = -bound;
            j += 1;
        }
    }
}

/// Per-δ genericity predicate for a weight array, read straight off the
/// definition.
pub fn weight_is_generic(lambda: &[Vec<Int>], p: Int, delta: Int) -> bool {
    lambda.iter().all(|row| {
        (0..row.len()).all(|i| {
            (i + 1..row.len()).all(|k| {
                let r = (row[i] - row[k]).rem_euclid(p - 1);
                delta <= r && r <= p - 1 - delta
            })
        })
    })
}

/// Searches shift vectors `(p a_j - a_{j+1})` with `a_j ∈ [-bound, bound]`.
pub fn brute_force_equivalent(a: &[Vec<Int>], b: &[Vec<Int>], p: Int, bound: Int) -> bool {
    let f = a.len();
    let mut shift = vec![-bound; f];
    loop {
        let hit = (0..f).all(|j| {
            let c = p * shift[j] - shift[(j + 1) % f];
            a[j].iter().zip(&b[j]).all(|(x, y)| x - y == c)
        });
        if hit {
            return true;
        }
        let mut j = 0;
        loop {
            if j == f {
                return false;
            }
            shift[j] += 1;
            if shift[j] <= bound {
                break;
            }
            shift[j] = -bound;
            j += 1;
        }
    }
}

/// Size of the `q`-orbit of `m` modulo `e_{ni f}`, by iteration.
pub fn orbit_size(params: Params, ni: usize, m: Int) -> usize {
    let e = params.p.pow((ni * params.f) as u32) - 1;
    let q = params.p.pow(params.f as u32);
    let start = m.rem_euclid(e);
    let mut cur = (start * q) % e;
    let mut size = 1;
    while cur != start {
        cur = (cur * q) % e;
        size += 1;
    }
    size
}

fn all_tuples(len: usize, values: Int) -> Vec<Vec<Int>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..values).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// `{ Σ_j (ξ_{j mod f}^{s(j)} + a_j) p^j mod e_d }` from exponent values `ξ_s`.
pub fn theta_final_by_enumeration(params: Params, xi_values: &[Int], ni: usize) -> BTreeSet<Int> {
    let Params { p, n, f } = params;
    let d = ni * f;
    let e_f = p.pow(f as u32) - 1;
    let e_d = p.pow(d as u32) - 1;
    let digit = |s: usize, j: usize| (xi_values[s].rem_euclid(e_f) / p.pow((j % f) as u32)) % p;
    let mut out = BTreeSet::new();
    for s in all_tuples(d, n as Int) {
        for a in all_tuples(d, n as Int) {
            let value: Int = (0..d).map(|j| (digit(s[j] as usize, j) + a[j]) * p.pow(j as u32)).sum();
            out.insert(value.rem_euclid(e_d));
        }
    }
    out
}

/// Survivors of elimination computed from scratch: every canonical `λ`
/// (differences in `[0, p-1]`, last column the digits of a residue in
/// `[0, e_f)`) whose covering exponents admit every summand.
pub fn naive_eliminate(params: Params, summands: &[(usize, Int)]) -> BTreeSet<Vec<Vec<Int>>> {
    let Params { p, n, f } = params;
    let e_f = p.pow(f as u32) - 1;
    let thetas_for = |xi: &[Int], ni: usize| theta_final_by_enumeration(params, xi, ni);
    let mut out = BTreeSet::new();
    for det in 0..e_f {
        for diffs in all_tuples(f * (n - 1), p) {
            let lambda: Vec<Vec<Int>> = (0..f)
                .map(|j| {
                    let mut row = vec![0; n];
                    row[n - 1] = (det / p.pow((f - 1 - j) as u32)) % p;
                    for i in (0..n - 1).rev() {
                        row[i] = row[i + 1] + diffs[j * (n - 1) + i];
                    }
                    row
                })
                .collect();
            let xi: Vec<Int> = (0..n)
                .map(|s| {
                    (0..f)
                        .map(|j| lambda[(f - j) % f][s] * p.pow(j as u32))
                        .sum::<Int>()
                        .rem_euclid(e_f)
                })
                .collect();
            let survives = summands.iter().all(|&(ni, m)| {
                let e_d = p.pow((ni * f) as u32) - 1;
                thetas_for(&xi, ni).contains(&m.rem_euclid(e_d))
            });
            if survives {
                out.insert(lambda);
            }
        }
    }
    out
}
