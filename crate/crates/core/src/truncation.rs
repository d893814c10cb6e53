//! Truncated discrete p-toral groups `(Z/p^ℓ)^r ⋊_c π`.
//!
//! An element is a pair `(t, w)` with `t` in the torus `(Z/p^ℓ)^r` and `w` in
//! the finite abelian p-group `π`. The product is
//! `(t₁,w₁)(t₂,w₂) = (t₁ + φ(w₁)t₂ + c(w₁,w₂), w₁w₂)`.
//!
//! Element indices are `torus_index * |π| + complement_index`, where the torus
//! index is the big-endian base-`p^ℓ` encoding of `t` and the complement index
//! is the big-endian mixed-radix encoding of the exponent vector of `w`.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Group, Subgroup};

/// The complement `π`, a finite abelian p-group given by its cyclic factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Complement {
    /// `Z/order`, generated by one element.
    Cyclic { order: u64 },
    /// `Z/o₁ × … × Z/o_k`, one generator per factor.
    Abelian { orders: Vec<u64> },
}

impl Complement {
    /// Orders of the cyclic factors (empty for the trivial group).
    pub fn orders(&self) -> Vec<u64> {
        match self {
            Complement::Cyclic { order } if *order <= 1 => Vec::new(),
            Complement::Cyclic { order } => vec![*order],
            Complement::Abelian { orders } => orders.iter().copied().filter(|&o| o > 1).collect(),
        }
    }

    /// Group order.
    pub fn order(&self) -> u64 {
        self.orders().iter().product()
    }
}

/// One nonzero value of the 2-cocycle: `c(a, b) = value`.
///
/// `a` and `b` are exponent vectors over the complement generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleEntry {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub value: Vec<String>,
}

/// Parameters of a truncated discrete p-toral group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub p: u64,
    pub rank: usize,
    pub level: u32,
    pub complement: Complement,
    /// One `rank × rank` matrix per complement generator, row-major, acting on
    /// column vectors. Entries are decimal strings read modulo `p^level`.
    pub action: Vec<Vec<Vec<String>>>,
    /// Nonzero cocycle values; omitted entries are zero.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cocycle: Vec<CocycleEntry>,
}

type Mat = Vec<Vec<u64>>;

/// A truncated discrete p-toral group with its Cayley table.
#[derive(Debug)]
pub struct Truncation {
    spec: TruncationSpec,
    modulus: u64,
    orders: Vec<u64>,
    comp_order: usize,
    torus_order: usize,
    phi: Vec<Mat>,
    cocycle: Vec<Vec<u64>>,
    group: Group,
    torus: Subgroup,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn parse_entry(s: &str, modulus: u64) -> Result<u64> {
    let v: i128 = s.trim().parse().map_err(|_| Error::InvalidSpec(format!("matrix entry {s:?} is not an integer")))?;
    Ok(v.rem_euclid(modulus as i128) as u64)
}

fn mat_mul(a: &Mat, b: &Mat, m: u64) -> Mat {
    let r = a.len();
    (0..r).map(|i| (0..r).map(|j| (0..r).fold(0u64, |acc, k| (acc + a[i][k] * b[k][j]) % m)).collect()).collect()
}

fn mat_vec(a: &Mat, v: &[u64], m: u64) -> Vec<u64> {
    a.iter().map(|row| row.iter().zip(v).fold(0u64, |acc, (x, y)| (acc + x * y) % m)).collect()
}

fn identity(r: usize) -> Mat {
    (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect()
}

fn det_mod_p(a: &Mat, p: u64) -> u64 {
    // Gaussian elimination over F_p.
    let r = a.len();
    let mut m: Vec<Vec<u64>> = a.iter().map(|row| row.iter().map(|x| x % p).collect()).collect();
    let mut det = 1u64;
    for col in 0..r {
        let Some(piv) = (col..r).find(|&i| m[i][col] != 0) else { return 0 };
        if piv != col {
            m.swap(piv, col);
            det = (p - det) % p;
        }
        det = det * m[col][col] % p;
        let inv = mod_pow(m[col][col], p - 2, p);
        for i in col + 1..r {
            let f = m[i][col] * inv % p;
            for j in col..r {
                m[i][j] = (m[i][j] + p * p - f * m[col][j] % p) % p;
            }
        }
    }
    det
}

/// `base^exp mod m`.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        exp >>= 1;
    }
    r
}

impl Truncation {
    /// Validates a spec and builds the group.
    pub fn new(spec: TruncationSpec, budget: &Budget) -> Result<Truncation> {
        let p = spec.p;
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!("p = {p} is not prime")));
        }
        if spec.level == 0 {
            return Err(Error::InvalidSpec("level must be at least 1".into()));
        }
        let modulus = p.checked_pow(spec.level).ok_or_else(|| Error::InvalidSpec("p^level overflows".into()))?;
        let orders = spec.complement.orders();
        for &o in &orders {
            if !crate::group::is_power_of(o as usize, p) {
                return Err(Error::InvalidSpec(format!("complement factor of order {o} is not a {p}-group")));
            }
        }
        let comp_order = orders.iter().product::<u64>() as usize;
        let torus_order = (modulus as usize)
            .checked_pow(spec.rank as u32)
            .ok_or_else(|| Error::InvalidSpec("torus order overflows".into()))?;
        let total = torus_order.saturating_mul(comp_order);
        budget.check_group_order(total)?;
        let r = spec.rank;
        if spec.action.len() != orders.len() {
            return Err(Error::InvalidSpec(format!(
                "{} action matrices for {} complement generators",
                spec.action.len(),
                orders.len()
            )));
        }
        let mut gen_mats = Vec::new();
        for m in &spec.action {
            if m.len() != r || m.iter().any(|row| row.len() != r) {
                return Err(Error::InvalidSpec("action matrix has the wrong shape".into()));
            }
            let parsed: Result<Mat> =
                m.iter().map(|row| row.iter().map(|s| parse_entry(s, modulus)).collect()).collect();
            let parsed = parsed?;
            if r > 0 && det_mod_p(&parsed, p) == 0 {
                return Err(Error::InvalidSpec("action matrix is not invertible".into()));
            }
            gen_mats.push(parsed);
        }
        // φ must be a homomorphism from the abelian group π: generator matrices
        // commute and satisfy A_i^{o_i} = 1.
        for (i, a) in gen_mats.iter().enumerate() {
            let mut pow = identity(r);
            for _ in 0..orders[i] {
                pow = mat_mul(&pow, a, modulus);
            }
            if pow != identity(r) {
                return Err(Error::InvalidSpec(format!(
                    "action of generator {i} does not have order dividing {}",
                    orders[i]
                )));
            }
            for b in &gen_mats[i + 1..] {
                if mat_mul(a, b, modulus) != mat_mul(b, a, modulus) {
                    return Err(Error::InvalidSpec("action matrices of an abelian complement do not commute".into()));
                }
            }
        }
        let decode_w = |w: usize| -> Vec<u64> {
            let mut out = vec![0; orders.len()];
            let mut rest = w as u64;
            for k in (0..orders.len()).rev() {
                out[k] = rest % orders[k];
                rest /= orders[k];
            }
            out
        };
        let phi: Vec<Mat> = (0..comp_order)
            .map(|w| {
                let exps = decode_w(w);
                let mut m = identity(r);
                for (k, &e) in exps.iter().enumerate() {
                    for _ in 0..e {
                        m = mat_mul(&m, &gen_mats[k], modulus);
                    }
                }
                m
            })
            .collect();
        let encode_w = |exps: &[u64]| -> Result<usize> {
            if exps.len() != orders.len() {
                return Err(Error::InvalidSpec("cocycle argument has the wrong length".into()));
            }
            let mut idx = 0u64;
            for (k, &e) in exps.iter().enumerate() {
                idx = idx * orders[k] + e % orders[k];
            }
            Ok(idx as usize)
        };
        let mut cocycle = vec![vec![0u64; r]; comp_order * comp_order];
        for entry in &spec.cocycle {
            let a = encode_w(&entry.a)?;
            let b = encode_w(&entry.b)?;
            if entry.value.len() != r {
                return Err(Error::InvalidSpec("cocycle value has the wrong length".into()));
            }
            let v: Result<Vec<u64>> = entry.value.iter().map(|s| parse_entry(s, modulus)).collect();
            cocycle[a * comp_order + b] = v?;
        }
        let wmul = |a: usize, b: usize| -> usize {
            let (ea, eb) = (decode_w(a), decode_w(b));
            let sum: Vec<u64> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
            encode_w(&sum).expect("lengths agree")
        };
        let add = |x: &[u64], y: &[u64]| -> Vec<u64> { x.iter().zip(y).map(|(a, b)| (a + b) % modulus).collect() };
        for w in 0..comp_order {
            if cocycle[w].iter().any(|&x| x != 0) || cocycle[w * comp_order].iter().any(|&x| x != 0) {
                return Err(Error::InvalidSpec("cocycle is not normalized: c(1,w) or c(w,1) is nonzero".into()));
            }
        }
        for w1 in 0..comp_order {
            for w2 in 0..comp_order {
                for w3 in 0..comp_order {
                    // φ(w₁)c(w₂,w₃) + c(w₁,w₂w₃) = c(w₁w₂,w₃) + c(w₁,w₂)
                    let lhs = add(
                        &mat_vec(&phi[w1], &cocycle[w2 * comp_order + w3], modulus),
                        &cocycle[w1 * comp_order + wmul(w2, w3)],
                    );
                    let rhs = add(&cocycle[wmul(w1, w2) * comp_order + w3], &cocycle[w1 * comp_order + w2]);
                    if lhs != rhs {
                        return Err(Error::InvalidSpec(format!(
                            "cocycle identity fails at complement elements ({w1},{w2},{w3})"
                        )));
                    }
                }
            }
        }
        let wtable: Vec<usize> = (0..comp_order * comp_order).map(|i| wmul(i / comp_order, i % comp_order)).collect();
        let decode_t = |t: usize| -> Vec<u64> {
            let mut out = vec![0; r];
            let mut rest = t as u64;
            for k in (0..r).rev() {
                out[k] = rest % modulus;
                rest /= modulus;
            }
            out
        };
        let encode_t = |v: &[u64]| -> usize { v.iter().fold(0u64, |acc, &x| acc * modulus + x) as usize };
        let tvecs: Vec<Vec<u64>> = (0..torus_order).map(decode_t).collect();
        let labels: Vec<String> = (0..total)
            .map(|e| {
                let t = &tvecs[e / comp_order];
                let w = decode_w(e % comp_order);
                let ts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                format!("({};{})", ts.join(","), ws.join(","))
            })
            .collect();
        let group = FiniteGroup::from_fn(total, labels, |a, b| {
            let (t1, w1) = (&tvecs[a / comp_order], a % comp_order);
            let (t2, w2) = (&tvecs[b / comp_order], b % comp_order);
            let mut t = add(t1, &mat_vec(&phi[w1], t2, modulus));
            t = add(&t, &cocycle[w1 * comp_order + w2]);
            encode_t(&t) * comp_order + wtable[w1 * comp_order + w2]
        })?;
        let torus_elems: Vec<Elem> = (0..torus_order).map(|t| (t * comp_order) as Elem).collect();
        let torus = Subgroup::from_elements(&group, &torus_elems);
        Ok(Truncation { spec, modulus, orders, comp_order, torus_order, phi, cocycle, group, torus })
    }

    /// The spec this group was built from.
    pub fn spec(&self) -> &TruncationSpec {
        &self.spec
    }

    /// The group itself.
    pub fn group(&self) -> &Group {
        &self.group
    }

    /// The maximal torus `T_ℓ = {(t, 1)}`.
    pub fn torus(&self) -> &Subgroup {
        &self.torus
    }

    /// `p^ℓ`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `|π|`.
    pub fn complement_order(&self) -> usize {
        self.comp_order
    }

    /// `|T_ℓ|`.
    pub fn torus_order(&self) -> usize {
        self.torus_order
    }

    /// The action matrix of a complement element index.
    pub fn action_matrix(&self, w: usize) -> &[Vec<u64>] {
        &self.phi[w]
    }

    /// Cocycle value at a pair of complement element indices.
    pub fn cocycle_value(&self, a: usize, b: usize) -> &[u64] {
        &self.cocycle[a * self.comp_order + b]
    }

    /// Encodes `(t, w)`; `w` is an exponent vector over the complement generators.
    pub fn element(&self, t: &[i64], w: &[u64]) -> Elem {
        let m = self.modulus as i64;
        let tidx = t.iter().fold(0u64, |acc, &x| acc * self.modulus + x.rem_euclid(m) as u64);
        let widx = w.iter().zip(&self.orders).fold(0u64, |acc, (&e, &o)| acc * o + e % o);
        (tidx as usize * self.comp_order + widx as usize) as Elem
    }

    /// Decodes an element into its torus vector and complement exponent vector.
    pub fn decode(&self, e: Elem) -> (Vec<u64>, Vec<u64>) {
        let e = e as usize;
        let mut t = vec![0; self.spec.rank];
        let mut rest = (e / self.comp_order) as u64;
        for k in (0..self.spec.rank).rev() {
            t[k] = rest % self.modulus;
            rest /= self.modulus;
        }
        let mut w = vec![0; self.orders.len()];
        let mut rest = (e % self.comp_order) as u64;
        for k in (0..self.orders.len()).rev() {
            w[k] = rest % self.orders[k];
            rest /= self.orders[k];
        }
        (t, w)
    }

    /// The canonical inclusion into the next level, `(t, w) -> (p·t, w)`.
    ///
    /// `next` must be the same construction one level higher.
    pub fn include_into(&self, next: &Truncation, e: Elem) -> Elem {
        let (t, w) = self.decode(e);
        let scaled: Vec<i64> = t.iter().map(|&x| (x * self.spec.p) as i64).collect();
        next.element(&scaled, &w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dihedral(level: u32, quaternion: bool) -> TruncationSpec {
        let cocycle = if quaternion {
            vec![CocycleEntry { a: vec![1], b: vec![1], value: vec![(1u64 << (level - 1)).to_string()] }]
        } else {
            Vec::new()
        };
        TruncationSpec {
            p: 2,
            rank: 1,
            level,
            complement: Complement::Cyclic { order: 2 },
            action: vec![vec![vec!["-1".into()]]],
            cocycle,
        }
    }

    #[test]
    fn dihedral_has_order_sixteen() {
        let g = Truncation::new(dihedral(3, false), &Budget::default()).unwrap();
        assert_eq!(g.group().order(), 16);
        assert_eq!(g.torus().order(), 8);
    }

    #[test]
    fn quaternion_has_unique_involution() {
        let g = Truncation::new(dihedral(3, true), &Budget::default()).unwrap();
        let grp = g.group();
        let involutions = (0..16).filter(|&e| grp.elem_order(e) == 2).count();
        assert_eq!(involutions, 1);
        let y = g.element(&[0], &[1]);
        assert_eq!(grp.elem_order(y), 4);
        assert_eq!(grp.mul(y, y), g.element(&[4], &[0]));
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = dihedral(3, false);
        s.p = 4;
        assert!(Truncation::new(s, &Budget::default()).is_err());
        let mut s = dihedral(4, false);
        s.action = vec![vec![vec!["3".into()]]];
        assert!(Truncation::new(s, &Budget::default()).is_err());
        let mut s = dihedral(3, false);
        s.action = vec![vec![vec!["2".into()]]];
        assert!(Truncation::new(s, &Budget::default()).is_err());
        let mut s = dihedral(3, false);
        s.cocycle = vec![CocycleEntry { a: vec![1], b: vec![1], value: vec!["1".into()] }];
        assert!(Truncation::new(s, &Budget::default()).is_err());
        let mut s = dihedral(3, false);
        s.complement = Complement::Cyclic { order: 3 };
        assert!(Truncation::new(s, &Budget::default()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = dihedral(3, true);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"kind\":\"cyclic\""));
        let back: TruncationSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn inclusion_is_a_homomorphism() {
        for q in [false, true] {
            let a = Truncation::new(dihedral(2, q), &Budget::default()).unwrap();
            let b = Truncation::new(dihedral(3, q), &Budget::default()).unwrap();
            let n = a.group().order() as Elem;
            for x in 0..n {
                for y in 0..n {
                    let lhs = a.include_into(&b, a.group().mul(x, y));
                    let rhs = b.group().mul(a.include_into(&b, x), a.include_into(&b, y));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
