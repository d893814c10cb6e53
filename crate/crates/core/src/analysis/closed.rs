//! Strongly closed and F-normal subgroups, and the center of F.

use std::collections::HashMap;

use crate::ambient::SubId;
use crate::fusion::FusionSystem;
use crate::group::Elem;

/// F-classes of the elements of the base: the class index of each element and the class sizes.
struct ElementClasses {
    index: HashMap<Elem, usize>,
    sizes: Vec<usize>,
}

fn element_classes(f: &FusionSystem) -> ElementClasses {
    let amb = f.ambient();
    let mut index = HashMap::new();
    let mut sizes = Vec::new();
    for &x in amb.sub(f.base()).elements() {
        if index.contains_key(&x) {
            continue;
        }
        let class = f.element_class(x);
        for &y in &class {
            index.insert(y, sizes.len());
        }
        sizes.push(class.len());
    }
    ElementClasses { index, sizes }
}

fn closed_under_classes(f: &FusionSystem, a: SubId, classes: &ElementClasses) -> bool {
    let mut met: HashMap<usize, usize> = HashMap::new();
    for &x in f.ambient().sub(a).elements() {
        *met.entry(classes.index[&x]).or_default() += 1;
    }
    // A is a union of classes when it meets each class it touches in the whole class.
    met.into_iter().all(|(c, n)| classes.sizes[c] == n)
}

/// Whether `f(P ∩ A) ≤ A` for every morphism of F.
///
/// This holds exactly when `A` is a union of F-classes of elements.
pub fn is_strongly_closed(f: &FusionSystem, a: SubId) -> bool {
    f.is_object(a) && closed_under_classes(f, a, &element_classes(f))
}

/// All strongly F-closed subgroups of the base, in lattice order.
pub fn strongly_closed_subgroups(f: &FusionSystem) -> Vec<SubId> {
    let classes = element_classes(f);
    f.objects().into_iter().filter(|&a| closed_under_classes(f, a, &classes)).collect()
}

/// Whether every morphism of F extends to `P·A` acting on `A` by an F-automorphism.
///
/// It is enough to test the generators: inner morphisms extend because `A` is
/// normal, and extensions are closed under composition and restriction.
pub fn is_f_normal(f: &FusionSystem, a: SubId) -> bool {
    f.is_object(a) && f.ambient().sub(a).is_normal_in(f.ambient().sub(f.base())) && failing_generator(f, a).is_none()
}

/// The first generator with no extension as required for F-normality, if any.
pub fn failing_generator(f: &FusionSystem, a: SubId) -> Option<usize> {
    let amb = f.ambient();
    if !f.is_object(a) {
        return Some(0);
    }
    f.generators().iter().position(|g| {
        let big = amb.join(g.dom, a);
        let pairs: Vec<(Elem, Elem)> =
            amb.sub(g.dom).elements().iter().copied().zip(g.images.iter().copied()).collect();
        !f.morphisms_with(big, f.base(), &pairs)
            .into_iter()
            .any(|imgs| amb.sub(a).elements().iter().all(|&x| amb.contains(a, imgs[amb.pos(big, x).expect("A ≤ P·A")])))
    })
}

/// F-normal subgroups of the base, in lattice order.
pub fn f_normal_subgroups(f: &FusionSystem) -> Vec<SubId> {
    strongly_closed_subgroups(f).into_iter().filter(|&a| is_f_normal(f, a)).collect()
}

/// Whether `A` is F-normal with `Aut_F(A)` trivial.
pub fn is_f_central(f: &FusionSystem, a: SubId) -> bool {
    f.is_object(a) && f.aut_order(a) == 1 && is_f_normal(f, a)
}

/// The center `Z(F)`: the largest F-central subgroup of `Z(S)`.
///
/// The F-central subgroups of `Z(S)` are closed under products, so the largest
/// one contains all others; this is asserted in debug builds.
pub fn f_center(f: &FusionSystem) -> SubId {
    let amb = f.ambient();
    let z = amb.center(f.base());
    let central: Vec<SubId> = amb.subgroups_of(z).into_iter().filter(|&a| is_f_central(f, a)).collect();
    let best = *central.iter().max_by_key(|&&a| (amb.sub_order(a), std::cmp::Reverse(a))).expect("1 is F-central");
    debug_assert!(central.iter().all(|&a| amb.is_sub(a, best)));
    best
}
