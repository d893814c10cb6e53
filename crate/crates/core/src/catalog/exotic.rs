//! The rank-2 group at p = 3 and its Weyl group `Γ_ℓ ≤ GL₂(Z/3^ℓ)`.
//!
//! `Γ_ℓ` is a subgroup isomorphic to `GL₂(3)` containing the action matrix of `x`.
//! At level 1 it is generated by `Ψ_a`, `Ψ_b`, `Ψ_c` and the action of `x`.
//! Reduced modulo `3^ℓ` those four matrices generate a group larger than
//! `GL₂(3)` for `ℓ ≥ 2`, since `Ψ_c⁴ = -4·I` has order `3^{ℓ-1}·2`. So the level-1
//! group is instead lifted one level at a time: it is generated by the action
//! of `x` and one element `g` of order 8, and `g` is lifted by trying
//! `g + 3^k·E` for `E` in lexicographic order until `⟨x, g⟩` has order 48 again.

use std::collections::HashSet;

/// A 2×2 matrix, row-major, acting on column vectors.
pub type Mat2 = [[i64; 2]; 2];

/// The action of `x` on the torus: `u ↦ u + v`, `v ↦ -3u - 2v`.
pub const X_ACTION: Mat2 = [[1, -3], [1, -2]];
/// `u ↦ u`, `v ↦ -v`.
pub const PSI_A: Mat2 = [[1, 0], [0, -1]];
/// `u ↦ v`, `v ↦ u`.
pub const PSI_B: Mat2 = [[0, 1], [1, 0]];
/// `u ↦ u - v`, `v ↦ u + v`.
pub const PSI_C: Mat2 = [[1, 1], [-1, 1]];

const GL23_ORDER: usize = 48;

/// Entries reduced into `0..m`.
pub fn reduce(a: &Mat2, m: i64) -> Mat2 {
    [[a[0][0].rem_euclid(m), a[0][1].rem_euclid(m)], [a[1][0].rem_euclid(m), a[1][1].rem_euclid(m)]]
}

/// Product modulo `m`.
pub fn mul(a: &Mat2, b: &Mat2, m: i64) -> Mat2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = (a[i][0] * b[0][j] + a[i][1] * b[1][j]).rem_euclid(m);
        }
    }
    c
}

/// Multiplicative order modulo `m` of an invertible matrix.
pub fn order(a: &Mat2, m: i64) -> usize {
    let id = [[1, 0], [0, 1]];
    let a = reduce(a, m);
    let mut b = a;
    let mut k = 1;
    while b != id {
        b = mul(&b, &a, m);
        k += 1;
    }
    k
}

/// The group generated by `gens` modulo `m`, sorted, or `None` once it exceeds `cap` elements.
pub fn closure(gens: &[Mat2], m: i64, cap: usize) -> Option<Vec<Mat2>> {
    let gens: Vec<Mat2> = gens.iter().map(|g| reduce(g, m)).collect();
    let id = [[1, 0], [0, 1]];
    let mut seen: HashSet<Mat2> = HashSet::from([id]);
    let mut all = vec![id];
    let mut i = 0;
    while i < all.len() {
        for g in &gens {
            let c = mul(&all[i], g, m);
            if seen.insert(c) {
                all.push(c);
                if all.len() > cap {
                    return None;
                }
            }
        }
        i += 1;
    }
    all.sort();
    Some(all)
}

/// The level-1 group `⟨Ψ_a, Ψ_b, Ψ_c, x⟩ ≤ GL₂(3)`.
pub fn level_one_group() -> Vec<Mat2> {
    closure(&[PSI_A, PSI_B, PSI_C, X_ACTION], 3, 10_000).expect("finite")
}

fn lift(g: Mat2, k: u32, level: u32) -> Option<Mat2> {
    if k == level {
        return Some(g);
    }
    let step = 3i64.pow(k);
    let m = step * 3;
    for e in 0..81 {
        let d = [(e / 27) % 3, (e / 9) % 3, (e / 3) % 3, e % 3];
        let h = [[g[0][0] + step * d[0], g[0][1] + step * d[1]], [g[1][0] + step * d[2], g[1][1] + step * d[3]]];
        if closure(&[X_ACTION, h], m, GL23_ORDER).is_some_and(|c| c.len() == GL23_ORDER) {
            if let Some(r) = lift(h, k + 1, level) {
                return Some(r);
            }
        }
    }
    None
}

/// Generators of `Γ_ℓ`: the action of `x` and the lifted order-8 element, reduced mod `3^ℓ`.
pub fn gamma_generators(level: u32) -> Vec<Mat2> {
    let g1 = level_one_group().into_iter().filter(|a| order(a, 3) == 8).min().expect("GL2(3) has elements of order 8");
    let m = 3i64.pow(level);
    let g = lift(g1, 1, level).expect("a lift exists at every level");
    vec![reduce(&X_ACTION, m), reduce(&g, m)]
}

/// All elements of `Γ_ℓ`, sorted.
pub fn gamma(level: u32) -> Vec<Mat2> {
    closure(&gamma_generators(level), 3i64.pow(level), GL23_ORDER).expect("Γ has order 48")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_group_is_gl23() {
        let g = level_one_group();
        assert_eq!(g.len(), 48);
        // Every invertible matrix over F_3 appears.
        let count = (0..81i64)
            .filter(|e| {
                let a = [[e / 27 % 3, e / 9 % 3], [e / 3 % 3, e % 3]];
                (a[0][0] * a[1][1] - a[0][1] * a[1][0]).rem_euclid(3) != 0
            })
            .count();
        assert_eq!(count, 48);
    }

    #[test]
    fn literal_generators_do_not_reduce_to_gl23_mod_9() {
        assert!(closure(&[PSI_A, PSI_B, PSI_C, X_ACTION], 9, 48).is_none());
        assert_eq!(order(&PSI_C, 9), 24);
    }

    #[test]
    fn gamma_has_order_48_and_contains_x() {
        for level in 1..=4 {
            let g = gamma(level);
            assert_eq!(g.len(), 48);
            assert!(g.contains(&reduce(&X_ACTION, 3i64.pow(level))));
        }
    }

    #[test]
    fn gamma_is_level_compatible() {
        for level in 1..=4 {
            let m = 3i64.pow(level);
            let low: HashSet<Mat2> = gamma(level).into_iter().collect();
            let high: HashSet<Mat2> = gamma(level + 1).into_iter().map(|a| reduce(&a, m)).collect();
            assert_eq!(low, high);
        }
    }

    #[test]
    fn gamma_reduces_onto_level_one_group() {
        let l1: HashSet<Mat2> = level_one_group().into_iter().collect();
        let l3: HashSet<Mat2> = gamma(3).into_iter().map(|a| reduce(&a, 3)).collect();
        assert_eq!(l1, l3);
    }
}
