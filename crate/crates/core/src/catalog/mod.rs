//! Named fusion systems and finite-group oracles.
//!
//! Entries are addressed by strings such as `so2:p=3,l=2`, `sullivan:p=5,n=4,l=2`,
//! `so3:l=3`, `su2:l=3`, `exotic3:l=2`, `product:(so3:l=3)x(so2:p=2,l=2)`,
//! `oracle:sym4,p=2` and `control:d16-outer`.

pub mod doc;
pub mod exotic;
pub mod oracle;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::ambient::{Ambient, SubId};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, Iso};
use crate::group::{injective_homs, Elem, GroupHom};
use crate::truncation::{mod_pow, CocycleEntry, Complement, Truncation, TruncationSpec};

pub use oracle::FiniteOracle;

/// A parsed catalog name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogName {
    /// The maximal torus of `SO(2)` at a prime: trivial fusion on `Z/p^ℓ`.
    So2 { p: u64, level: u32 },
    /// `Z/p^ℓ` with an automorphism group of order `n` dividing `p - 1`.
    Sullivan { p: u64, n: u64, level: u32 },
    /// The dihedral truncation with `Aut_F(V) = GL₂(2)`.
    So3 { level: u32 },
    /// The generalized quaternion truncation with `Aut_F(W) = Aut(Q₈)`.
    Su2 { level: u32 },
    /// The rank-2 construction at `p = 3` with Weyl group `GL₂(3)`.
    Exotic3 { level: u32 },
    /// Product of two entries over the same prime.
    Product(Box<CatalogName>, Box<CatalogName>),
    /// `F_S(G)` for a small finite group `G`.
    Oracle { group: String, p: u64 },
    /// Dihedral group of order 16 with `Aut(V)` and an outer automorphism of `S`.
    D16Outer,
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogName::So2 { p, level } => write!(f, "so2:p={p},l={level}"),
            CatalogName::Sullivan { p, n, level } => write!(f, "sullivan:p={p},n={n},l={level}"),
            CatalogName::So3 { level } => write!(f, "so3:l={level}"),
            CatalogName::Su2 { level } => write!(f, "su2:l={level}"),
            CatalogName::Exotic3 { level } => write!(f, "exotic3:l={level}"),
            CatalogName::Product(a, b) => write!(f, "product:({a})x({b})"),
            CatalogName::Oracle { group, p } => write!(f, "oracle:{group},p={p}"),
            CatalogName::D16Outer => write!(f, "control:d16-outer"),
        }
    }
}

fn parse_params(text: &str) -> Result<BTreeMap<String, u64>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) =
            part.split_once('=').ok_or_else(|| Error::UnknownEntry(format!("parameter {part:?} is not key=value")))?;
        let key = match k.trim() {
            "ℓ" | "level" => "l".to_string(),
            other => other.to_string(),
        };
        let value = v.trim().parse().map_err(|_| Error::UnknownEntry(format!("parameter {part:?} is not a number")))?;
        out.insert(key, value);
    }
    Ok(out)
}

fn take(params: &BTreeMap<String, u64>, key: &str, allowed: &[&str]) -> Result<u64> {
    if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::UnknownEntry(format!("unexpected parameter {bad}")));
    }
    params.get(key).copied().ok_or_else(|| Error::UnknownEntry(format!("missing parameter {key}")))
}

/// Splits `(a)x(b)` at the top-level `)x(`.
fn split_product(text: &str) -> Result<(&str, &str)> {
    let bad = || Error::UnknownEntry(format!("product must look like (A)x(B), got {text:?}"));
    let inner = text.strip_prefix('(').ok_or_else(bad)?;
    let mut depth = 1i32;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    let left = &inner[..i];
                    let rest = inner[i + 1..].strip_prefix("x(").ok_or_else(bad)?;
                    let right = rest.strip_suffix(')').ok_or_else(bad)?;
                    return Ok((left, right));
                }
            }
            _ => {}
        }
    }
    Err(bad())
}

impl std::str::FromStr for CatalogName {
    type Err = Error;

    fn from_str(text: &str) -> Result<CatalogName> {
        let text = text.trim();
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let level = |params: &BTreeMap<String, u64>, allowed: &[&str]| -> Result<u32> {
            Ok(take(params, "l", allowed)? as u32)
        };
        Ok(match kind {
            "so2" => {
                let ps = parse_params(rest)?;
                CatalogName::So2 { p: take(&ps, "p", &["p", "l"])?, level: level(&ps, &["p", "l"])? }
            }
            "sullivan" => {
                let ps = parse_params(rest)?;
                let allowed = ["p", "n", "l"];
                CatalogName::Sullivan {
                    p: take(&ps, "p", &allowed)?,
                    n: take(&ps, "n", &allowed)?,
                    level: level(&ps, &allowed)?,
                }
            }
            "so3" => CatalogName::So3 { level: level(&parse_params(rest)?, &["l"])? },
            "su2" => CatalogName::Su2 { level: level(&parse_params(rest)?, &["l"])? },
            "exotic3" => CatalogName::Exotic3 { level: level(&parse_params(rest)?, &["l"])? },
            "product" => {
                let (a, b) = split_product(rest)?;
                CatalogName::Product(Box::new(a.parse()?), Box::new(b.parse()?))
            }
            "oracle" => {
                let (group, params) = rest.split_once(',').unwrap_or((rest, ""));
                let ps = parse_params(params)?;
                if oracle::oracle_permutations(group).is_none() {
                    return Err(Error::UnknownEntry(format!("oracle group {group:?}")));
                }
                CatalogName::Oracle { group: group.to_string(), p: take(&ps, "p", &["p"])? }
            }
            "control" if rest == "d16-outer" => CatalogName::D16Outer,
            _ => return Err(Error::UnknownEntry(text.to_string())),
        })
    }
}

/// Names listed by `catalog list`.
pub fn standard_names() -> Vec<&'static str> {
    vec![
        "so2:p=2,l=2",
        "so2:p=3,l=2",
        "so2:p=5,l=2",
        "sullivan:p=5,n=4,l=2",
        "so3:l=2",
        "so3:l=3",
        "su2:l=2",
        "su2:l=3",
        "exotic3:l=1",
        "exotic3:l=2",
        "product:(so3:l=3)x(so2:p=2,l=2)",
        "oracle:sym4,p=2",
        "oracle:d12,p=3",
        "oracle:sl23,p=3",
        "control:d16-outer",
    ]
}

/// A quantity recorded with an entry and re-checked when it is built.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Expected {
    /// What is measured, e.g. `|S|` or `|Aut_F(V)|`.
    pub what: String,
    pub value: u64,
}

/// A built catalog entry.
#[derive(Debug)]
pub struct CatalogEntry {
    pub name: CatalogName,
    pub system: FusionSystem,
    /// Named subgroups such as `S`, `T`, `V`, `W`.
    pub subgroups: BTreeMap<String, SubId>,
    pub oracle: Option<FiniteOracle>,
    pub expected: Vec<Expected>,
}

impl CatalogEntry {
    /// The ambient group.
    pub fn ambient(&self) -> &Arc<Ambient> {
        self.system.ambient()
    }

    /// A named subgroup.
    pub fn subgroup(&self, name: &str) -> Result<SubId> {
        self.subgroups
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEntry(format!("subgroup {name} of {}", self.name)))
    }

    /// Recomputes each expected quantity, returning `(what, expected, actual)` for mismatches.
    pub fn mismatches(&self) -> Vec<(String, u64, u64)> {
        self.expected
            .iter()
            .filter_map(|e| {
                let actual = self.measure(&e.what)?;
                (actual != e.value).then(|| (e.what.clone(), e.value, actual))
            })
            .collect()
    }

    fn measure(&self, what: &str) -> Option<u64> {
        let f = &self.system;
        let amb = f.ambient();
        if let Some(inner) = what.strip_prefix("|Aut_F(").and_then(|s| s.strip_suffix(")|")) {
            return Some(f.aut_order(*self.subgroups.get(inner)?) as u64);
        }
        if let Some(inner) = what.strip_prefix('|').and_then(|s| s.strip_suffix('|')) {
            return Some(amb.sub_order(*self.subgroups.get(inner)?) as u64);
        }
        match what {
            "classes" => Some(f.class_count() as u64),
            _ => None,
        }
    }
}

/// Builds an entry by name.
pub fn build(name: &str, budget: &Budget) -> Result<CatalogEntry> {
    build_named(&name.parse()?, budget)
}

/// Builds an entry from a parsed name.
pub fn build_named(name: &CatalogName, budget: &Budget) -> Result<CatalogEntry> {
    let entry = match name {
        CatalogName::So2 { p, level } => build_so2(*p, *level, budget)?,
        CatalogName::Sullivan { p, n, level } => build_sullivan(*p, *n, *level, budget)?,
        CatalogName::So3 { level } => build_so3(*level, budget)?,
        CatalogName::Su2 { level } => build_su2(*level, budget)?,
        CatalogName::Exotic3 { level } => build_exotic3(*level, budget)?,
        CatalogName::Product(a, b) => build_product(&build_named(a, budget)?, &build_named(b, budget)?, budget)?,
        CatalogName::Oracle { group, p } => build_oracle(group, *p, budget)?,
        CatalogName::D16Outer => build_d16_outer(budget)?,
    };
    let bad = entry.mismatches();
    if let Some((what, want, got)) = bad.first() {
        return Err(Error::Malformed(format!("{}: {what} is {got}, expected {want}", entry.name)));
    }
    Ok(entry)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn check_level(level: u32, min: u32) -> Result<()> {
    if level < min {
        return Err(Error::Precondition(format!("level must be at least {min}, got {level}")));
    }
    Ok(())
}

fn torus_names(
    prefix: &str,
    p: u64,
    level: u32,
    coordinate: usize,
    rank: usize,
    trunc: &Truncation,
) -> Vec<(String, Elem)> {
    (1..=level)
        .map(|k| {
            let mut t = vec![0i64; rank];
            t[coordinate] = p.pow(level - k) as i64;
            (format!("{prefix}{k}"), trunc.element(&t, &vec![0; trunc.spec().complement.orders().len()]))
        })
        .collect()
}

fn ambient_from(
    name: &CatalogName,
    spec: TruncationSpec,
    extra: &[(&str, Vec<i64>, Vec<u64>)],
    budget: &Budget,
) -> Result<Arc<Ambient>> {
    let trunc = Truncation::new(spec, budget)?;
    let (p, level, rank) = (trunc.spec().p, trunc.spec().level, trunc.spec().rank);
    let mut names = BTreeMap::new();
    let prefixes: &[&str] = if rank == 1 { &["t"] } else { &["u", "v"] };
    for (c, prefix) in prefixes.iter().enumerate() {
        for (k, e) in torus_names(prefix, p, level, c, rank, &trunc) {
            names.insert(k, e);
        }
    }
    for (k, t, w) in extra {
        names.insert(k.to_string(), trunc.element(t, w));
    }
    Ambient::from_truncation(&name.to_string(), trunc, names, budget)
}

fn rank_one_spec(
    p: u64,
    level: u32,
    complement: Complement,
    action: Vec<Vec<Vec<String>>>,
    cocycle: Vec<CocycleEntry>,
) -> TruncationSpec {
    TruncationSpec { p, rank: 1, level, complement, action, cocycle }
}

fn all_automorphisms(amb: &Ambient, p: SubId, budget: &Budget) -> Result<Vec<Iso>> {
    let sub = amb.sub(p);
    Ok(injective_homs(sub, sub, budget)?
        .into_iter()
        .map(|h| Iso { dom: p, cod: p, images: h.images().to_vec() })
        .collect())
}

fn base_subgroups(amb: &Ambient) -> BTreeMap<String, SubId> {
    BTreeMap::from([("S".to_string(), amb.whole()), ("T".to_string(), amb.torus_id())])
}

/// Trivial fusion on `Z/p^ℓ`.
pub fn build_so2(p: u64, level: u32, budget: &Budget) -> Result<CatalogEntry> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    check_level(level, 1)?;
    let name = CatalogName::So2 { p, level };
    let spec = rank_one_spec(p, level, Complement::Cyclic { order: 1 }, Vec::new(), Vec::new());
    let amb = ambient_from(&name, spec, &[], budget)?;
    let system = FusionSystem::inner(&amb, amb.whole(), &name.to_string());
    Ok(CatalogEntry {
        expected: vec![
            Expected { what: "|S|".into(), value: p.pow(level) },
            Expected { what: "|Aut_F(S)|".into(), value: 1 },
        ],
        subgroups: base_subgroups(&amb),
        name,
        system,
        oracle: None,
    })
}

/// The smallest primitive root modulo the odd prime `p`.
pub fn smallest_primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let factors: Vec<u64> = (2..=phi).filter(|&q| phi.is_multiple_of(q) && is_prime(q)).collect();
    (2..p).find(|&g| factors.iter().all(|&q| mod_pow(g, phi / q, p) != 1)).expect("primitive roots exist")
}

/// The unit of order `n` modulo `p^ℓ` used by the Sullivan entry.
///
/// It is the `(p-1)/n`-th power of the Teichmüller lift `g^{p^{ℓ-1}}` of the
/// smallest primitive root `g`, so it is compatible across levels.
pub fn sullivan_unit(p: u64, n: u64, level: u32) -> u64 {
    let m = p.pow(level);
    let g = smallest_primitive_root(p);
    let teich = mod_pow(g, p.pow(level - 1), m);
    mod_pow(teich, (p - 1) / n, m)
}

/// `Z/p^ℓ` with `Aut_F(S)` cyclic of order `n`.
pub fn build_sullivan(p: u64, n: u64, level: u32, budget: &Budget) -> Result<CatalogEntry> {
    if !is_prime(p) || p == 2 {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    if n < 2 || !(p - 1).is_multiple_of(n) {
        return Err(Error::Precondition(format!("n = {n} must be at least 2 and divide p - 1 = {}", p - 1)));
    }
    check_level(level, 1)?;
    let name = CatalogName::Sullivan { p, n, level };
    let spec = rank_one_spec(p, level, Complement::Cyclic { order: 1 }, Vec::new(), Vec::new());
    let amb = ambient_from(&name, spec, &[], budget)?;
    let zeta = sullivan_unit(p, n, level);
    let trunc = amb.truncation().expect("truncation ambient").clone();
    let s = amb.whole();
    let images: Vec<Elem> = amb
        .sub(s)
        .elements()
        .iter()
        .map(|&e| {
            let (t, _) = trunc.decode(e);
            trunc.element(&[(t[0] * zeta % trunc.modulus()) as i64], &[])
        })
        .collect();
    let system = FusionSystem::from_isos(&amb, s, &name.to_string(), vec![Iso { dom: s, cod: s, images }])?;
    Ok(CatalogEntry {
        expected: vec![
            Expected { what: "|S|".into(), value: p.pow(level) },
            Expected { what: "|Aut_F(S)|".into(), value: n },
        ],
        subgroups: base_subgroups(&amb),
        name,
        system,
        oracle: None,
    })
}

fn dihedral_spec(level: u32, quaternion: bool) -> TruncationSpec {
    let cocycle = if quaternion {
        vec![CocycleEntry { a: vec![1], b: vec![1], value: vec![(1u64 << (level - 1)).to_string()] }]
    } else {
        Vec::new()
    };
    rank_one_spec(2, level, Complement::Cyclic { order: 2 }, vec![vec![vec!["-1".into()]]], cocycle)
}

/// The dihedral truncation `D_{2^{ℓ+1}}` with `Aut_F(V) = Aut(V)` for `V = ⟨t₁, x⟩`.
pub fn build_so3(level: u32, budget: &Budget) -> Result<CatalogEntry> {
    check_level(level, 2)?;
    let name = CatalogName::So3 { level };
    let amb = ambient_from(&name, dihedral_spec(level, false), &[("x", vec![0], vec![1])], budget)?;
    let v = amb.generated(&[amb.named("t1").expect("t1"), amb.named("x").expect("x")]);
    let system = FusionSystem::from_isos(&amb, amb.whole(), &name.to_string(), all_automorphisms(&amb, v, budget)?)?;
    let mut subgroups = base_subgroups(&amb);
    subgroups.insert("V".into(), v);
    Ok(CatalogEntry {
        expected: vec![
            Expected { what: "|S|".into(), value: 1 << (level + 1) },
            Expected { what: "|V|".into(), value: 4 },
            Expected { what: "|Aut_F(V)|".into(), value: 6 },
        ],
        subgroups,
        name,
        system,
        oracle: None,
    })
}

/// The generalized quaternion truncation `Q_{2^{ℓ+1}}` with `Aut_F(W) = Aut(W)` for `W = ⟨t₂, y⟩`.
pub fn build_su2(level: u32, budget: &Budget) -> Result<CatalogEntry> {
    check_level(level, 2)?;
    let name = CatalogName::Su2 { level };
    let amb = ambient_from(&name, dihedral_spec(level, true), &[("y", vec![0], vec![1])], budget)?;
    let w = amb.generated(&[amb.named("t2").expect("t2"), amb.named("y").expect("y")]);
    let system = FusionSystem::from_isos(&amb, amb.whole(), &name.to_string(), all_automorphisms(&amb, w, budget)?)?;
    let mut subgroups = base_subgroups(&amb);
    subgroups.insert("W".into(), w);
    subgroups.insert("Z".into(), amb.generated(&[amb.named("t1").expect("t1")]));
    Ok(CatalogEntry {
        expected: vec![
            Expected { what: "|S|".into(), value: 1 << (level + 1) },
            Expected { what: "|W|".into(), value: 8 },
            Expected { what: "|Aut_F(W)|".into(), value: 24 },
        ],
        subgroups,
        name,
        system,
        oracle: None,
    })
}

/// Truncation spec of the rank-2 group at `p = 3`.
pub fn exotic_spec(level: u32) -> TruncationSpec {
    let a = exotic::X_ACTION;
    TruncationSpec {
        p: 3,
        rank: 2,
        level,
        complement: Complement::Cyclic { order: 3 },
        action: vec![a.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect()],
        cocycle: Vec::new(),
    }
}

/// The automorphism of the torus given by a matrix, as images of the torus elements.
fn torus_automorphism(amb: &Ambient, m: &exotic::Mat2) -> Vec<Elem> {
    let trunc = amb.truncation().expect("truncation ambient");
    let md = trunc.modulus() as i64;
    amb.torus()
        .elements()
        .iter()
        .map(|&e| {
            let (t, _) = trunc.decode(e);
            let (a, b) = (t[0] as i64, t[1] as i64);
            trunc.element(
                &[(m[0][0] * a + m[0][1] * b).rem_euclid(md), (m[1][0] * a + m[1][1] * b).rem_euclid(md)],
                &[0],
            )
        })
        .collect()
}

/// `Aut_H(S)` for `H = T ⋊ Γ`: the maps `(t, x^k) ↦ (γt, x^{ek})` for `γ M γ⁻¹ = M^e`.
fn exotic_aut_h_s(amb: &Ambient, gamma: &[exotic::Mat2]) -> Vec<Iso> {
    let trunc = amb.truncation().expect("truncation ambient");
    let md = trunc.modulus() as i64;
    let m = exotic::reduce(&exotic::X_ACTION, md);
    let m2 = exotic::mul(&m, &m, md);
    let mut out = Vec::new();
    for g in gamma {
        let ginv = gamma.iter().find(|h| exotic::mul(g, h, md) == [[1, 0], [0, 1]]).expect("group");
        let conj = exotic::mul(&exotic::mul(g, &m, md), ginv, md);
        let e = if conj == m {
            1
        } else if conj == m2 {
            2
        } else {
            continue;
        };
        let images: Vec<Elem> = amb
            .sub(amb.whole())
            .elements()
            .iter()
            .map(|&x| {
                let (t, w) = trunc.decode(x);
                let (a, b) = (t[0] as i64, t[1] as i64);
                let gt = [(g[0][0] * a + g[0][1] * b).rem_euclid(md), (g[1][0] * a + g[1][1] * b).rem_euclid(md)];
                trunc.element(&gt, &[(w[0] * e) % 3])
            })
            .collect();
        out.push(Iso { dom: amb.whole(), cod: amb.whole(), images });
    }
    out
}

/// The rank-2 group `(Z/3^ℓ)² ⋊ Z/3` with `Aut_F(T) = Γ_ℓ`, `Aut_F(V) = GL₂(3)` and `Aut_H(S)`.
pub fn build_exotic3(level: u32, budget: &Budget) -> Result<CatalogEntry> {
    check_level(level, 1)?;
    let name = CatalogName::Exotic3 { level };
    let amb = ambient_from(&name, exotic_spec(level), &[("x", vec![0, 0], vec![1])], budget)?;
    let v1 = amb.named("v1").expect("v1");
    let v = amb.generated(&[v1, amb.named("x").expect("x")]);
    let t = amb.torus_id();
    let mut gens = all_automorphisms(&amb, v, budget)?;
    for g in exotic::gamma_generators(level) {
        gens.push(Iso { dom: t, cod: t, images: torus_automorphism(&amb, &g) });
    }
    gens.extend(exotic_aut_h_s(&amb, &exotic::gamma(level)));
    let system = FusionSystem::from_isos(&amb, amb.whole(), &name.to_string(), gens)?;
    let mut subgroups = base_subgroups(&amb);
    subgroups.insert("V".into(), v);
    subgroups.insert("Z".into(), amb.center(amb.whole()));
    Ok(CatalogEntry {
        expected: vec![
            Expected { what: "|S|".into(), value: 3u64.pow(2 * level + 1) },
            Expected { what: "|Z|".into(), value: 3 },
            Expected { what: "|Aut_F(V)|".into(), value: 48 },
            Expected { what: "|Aut_F(T)|".into(), value: 48 },
        ],
        subgroups,
        name,
        system,
        oracle: None,
    })
}

/// The product fusion system over `S₁ × S₂`.
pub fn build_product(a: &CatalogEntry, b: &CatalogEntry, budget: &Budget) -> Result<CatalogEntry> {
    let (aa, ab) = (a.ambient(), b.ambient());
    if a.system.base() != aa.whole() || b.system.base() != ab.whole() {
        return Err(Error::Precondition("product factors must be systems over their whole ambient".into()));
    }
    let (amb, embed_a, embed_b) = Ambient::product(aa, ab, budget)?;
    let name = CatalogName::Product(Box::new(a.name.clone()), Box::new(b.name.clone()));
    let nb = ab.order() as Elem;
    let pairs = |left: &[Elem], right: &[Elem]| -> Vec<Elem> {
        let mut v: Vec<Elem> = left.iter().flat_map(|&x| right.iter().map(move |&y| x * nb + y)).collect();
        v.sort_unstable();
        v
    };
    let all_a: Vec<Elem> = (0..aa.order() as Elem).collect();
    let all_b: Vec<Elem> = (0..nb).collect();
    let mut gens = Vec::new();
    for g in a.system.generators() {
        let dom = amb.id_of_elements(&pairs(aa.sub(g.dom).elements(), &all_b)).expect("product subgroup");
        let images: Vec<Elem> = amb
            .sub(dom)
            .elements()
            .iter()
            .map(|&e| g.images[aa.pos(g.dom, e / nb).expect("first coordinate")] * nb + e % nb)
            .collect();
        let cod = amb.id_of_elements(&pairs(aa.sub(g.cod).elements(), &all_b)).expect("product subgroup");
        gens.push(Iso { dom, cod, images });
    }
    for g in b.system.generators() {
        let dom = amb.id_of_elements(&pairs(&all_a, ab.sub(g.dom).elements())).expect("product subgroup");
        let images: Vec<Elem> = amb
            .sub(dom)
            .elements()
            .iter()
            .map(|&e| (e / nb) * nb + g.images[ab.pos(g.dom, e % nb).expect("second coordinate")])
            .collect();
        let cod = amb.id_of_elements(&pairs(&all_a, ab.sub(g.cod).elements())).expect("product subgroup");
        gens.push(Iso { dom, cod, images });
    }
    let system = FusionSystem::from_isos(&amb, amb.whole(), &name.to_string(), gens)?;
    let mut subgroups = base_subgroups(&amb);
    for (k, &id) in &a.subgroups {
        let elems: Vec<Elem> = aa.sub(id).elements().iter().map(|&x| embed_a[x as usize]).collect();
        subgroups.insert(format!("{k}1"), amb.id_of_elements(&elems).expect("factor subgroup"));
    }
    for (k, &id) in &b.subgroups {
        let elems: Vec<Elem> = ab.sub(id).elements().iter().map(|&x| embed_b[x as usize]).collect();
        subgroups.insert(format!("{k}2"), amb.id_of_elements(&elems).expect("factor subgroup"));
    }
    let aut = (a.system.aut_order(aa.whole()) * b.system.aut_order(ab.whole())) as u64;
    Ok(CatalogEntry {
        expected: vec![
            Expected { what: "|S|".into(), value: (aa.order() * ab.order()) as u64 },
            Expected { what: "|Aut_F(S)|".into(), value: aut },
        ],
        subgroups,
        name,
        system,
        oracle: None,
    })
}

/// `F_S(G)` for a named small group.
pub fn build_oracle(group: &str, p: u64, budget: &Budget) -> Result<CatalogEntry> {
    let oracle = FiniteOracle::named(group, p, budget)?;
    let name = CatalogName::Oracle { group: group.to_string(), p };
    let system = oracle.fusion_system()?;
    let amb = oracle.ambient().clone();
    let order = crate::group::p_part(oracle.group().order(), p) as u64;
    Ok(CatalogEntry {
        expected: vec![Expected { what: "|S|".into(), value: order }],
        subgroups: BTreeMap::from([("S".to_string(), amb.whole())]),
        name,
        system,
        oracle: Some(oracle),
    })
}

/// `D₁₆` with `Aut(V)` and the automorphism `t ↦ t`, `x ↦ t·x` (not inner).
///
/// This system fails the Sylow condition at `S`: `Out_F(S)` contains a
/// nontrivial 2-element while `Out_S(S)` is trivial.
pub fn build_d16_outer(budget: &Budget) -> Result<CatalogEntry> {
    let name = CatalogName::D16Outer;
    let amb = ambient_from(&name, dihedral_spec(3, false), &[("x", vec![0], vec![1])], budget)?;
    let v = amb.generated(&[amb.named("t1").expect("t1"), amb.named("x").expect("x")]);
    let trunc = amb.truncation().expect("truncation ambient").clone();
    let s = amb.whole();
    let images: Vec<Elem> = amb
        .sub(s)
        .elements()
        .iter()
        .map(|&e| {
            let (t, w) = trunc.decode(e);
            trunc.element(&[(t[0] + w[0]) as i64], &w)
        })
        .collect();
    let outer = GroupHom::from_images(amb.sub(s), amb.sub(s), images.clone())?;
    if !outer.is_injective() {
        return Err(Error::InvalidGenerator("outer map is not an automorphism".into()));
    }
    let mut gens = all_automorphisms(&amb, v, budget)?;
    gens.push(Iso { dom: s, cod: s, images });
    let system = FusionSystem::from_isos(&amb, s, &name.to_string(), gens)?;
    let mut subgroups = base_subgroups(&amb);
    subgroups.insert("V".into(), v);
    Ok(CatalogEntry {
        expected: vec![Expected { what: "|S|".into(), value: 16 }, Expected { what: "|Aut_F(S)|".into(), value: 16 }],
        subgroups,
        name,
        system,
        oracle: None,
    })
}
