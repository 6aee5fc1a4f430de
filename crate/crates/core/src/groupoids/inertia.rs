//! Inertia groupoids, inertia of generalized morphisms, and the local decomposition.

use std::collections::HashMap;
use std::sync::Arc;

use super::{same_groupoid, FiniteGroupoid, Functor, GeneralizedMorphism, GroupoidError};
use crate::groups::{FiniteGroup, GroupEmbedding};

/// Objects are loops `l: x → x`; an arrow `l → g∘l∘g⁻¹` is an arrow `g` out of `x`.
#[derive(Debug, Clone)]
pub struct InertiaGroupoid {
    base: Arc<FiniteGroupoid>,
    groupoid: Arc<FiniteGroupoid>,
    loops: Vec<usize>,
    loop_index: HashMap<usize, usize>,
    arrows: Vec<(usize, usize, usize)>,
    arrow_index: HashMap<(usize, usize), usize>,
    beta: Functor,
}

impl InertiaGroupoid {
    pub fn new(base: &Arc<FiniteGroupoid>) -> Result<Self, GroupoidError> {
        let loops: Vec<usize> = (0..base.num_arrows())
            .filter(|&a| base.source(a) == base.target(a))
            .collect();
        let loop_index: HashMap<usize, usize> =
            loops.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let conj = |g: usize, l: usize| {
            let gl = base.compose(g, l).expect("composable");
            base.compose(gl, base.inverse(g)).expect("composable")
        };
        let mut arrows = Vec::new();
        for (i, &l) in loops.iter().enumerate() {
            for &g in base.arrows_from(base.source(l)) {
                arrows.push((i, loop_index[&conj(g, l)], g));
            }
        }
        let arrow_index: HashMap<(usize, usize), usize> = arrows
            .iter()
            .enumerate()
            .map(|(k, &(i, _, g))| ((i, g), k))
            .collect();
        let groupoid = Arc::new(FiniteGroupoid::associative(
            loops.len(),
            arrows.iter().map(|a| a.0).collect(),
            arrows.iter().map(|a| a.1).collect(),
            |a, b| {
                let (i, _, gb) = arrows[b];
                arrow_index[&(i, base.compose(arrows[a].2, gb).expect("composable"))]
            },
        )?);
        let beta = Functor::new(
            groupoid.clone(),
            base.clone(),
            loops.iter().map(|&l| base.source(l)).collect(),
            arrows.iter().map(|a| a.2).collect(),
        )?;
        Ok(InertiaGroupoid {
            base: base.clone(),
            groupoid,
            loops,
            loop_index,
            arrows,
            arrow_index,
            beta,
        })
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    /// `β: IG → G`
    pub fn beta(&self) -> &Functor {
        &self.beta
    }

    /// The tautological label: the loop an object stands for.
    pub fn tau(&self, object: usize) -> usize {
        self.loops[object]
    }

    pub fn object_of_loop(&self, l: usize) -> Option<usize> {
        self.loop_index.get(&l).copied()
    }

    /// `(source loop, target loop, conjugating arrow)`
    pub fn arrow_data(&self, a: usize) -> (usize, usize, usize) {
        self.arrows[a]
    }

    /// The arrow out of `object` given by the base arrow `g`.
    pub fn arrow_from(&self, object: usize, g: usize) -> Option<usize> {
        self.arrow_index.get(&(object, g)).copied()
    }
}

/// `IZ = {(g, z, h) : g·z = z·h}` with `Iρ = g`, `Iσ = h`.
pub fn inertia_of_morphism(
    z: &GeneralizedMorphism,
    ig: &InertiaGroupoid,
    ih: &InertiaGroupoid,
) -> Result<GeneralizedMorphism, GroupoidError> {
    if !same_groupoid(z.source(), &ig.base) || !same_groupoid(z.target(), &ih.base) {
        return Err(GroupoidError::Mismatch(
            "inertia groupoids do not match the morphism".into(),
        ));
    }
    let g = z.source();
    let elems: Vec<(usize, usize, usize)> = (0..z.size())
        .flat_map(|p| {
            g.isotropy(z.rho(p)).iter().map(move |&l| {
                let h = z
                    .right_quotient(p, z.act_left(l, p).expect("defined"))
                    .expect("same H-orbit");
                (ig.loop_index[&l], p, ih.loop_index[&h])
            })
        })
        .collect();
    let index: HashMap<(usize, usize), usize> = elems
        .iter()
        .enumerate()
        .map(|(k, &(i, p, _))| ((i, p), k))
        .collect();
    GeneralizedMorphism::new(
        ig.groupoid.clone(),
        ih.groupoid.clone(),
        elems.iter().map(|e| e.0).collect(),
        elems.iter().map(|e| e.2).collect(),
        |a, e| {
            let (_, i2, arrow) = ig.arrows[a];
            index[&(i2, z.act_left(arrow, elems[e].1).expect("defined"))]
        },
        |e, b| {
            let (i, p, _) = elems[e];
            index[&(i, z.act_right(p, ih.arrows[b].2).expect("defined"))]
        },
    )
}

/// One component `Z_G(g) ⋉ S^g` of the inertia of `G ⋉ S`, with its
/// comparison to the loops of `G ⋉ S` conjugate to `g`.
#[derive(Debug, Clone)]
pub struct InertiaModel {
    pub class: usize,
    pub element: usize,
    pub centralizer_order: usize,
    pub fixed_points: Vec<usize>,
    pub component: Arc<FiniteGroupoid>,
    pub loops: usize,
    pub equivalence: GeneralizedMorphism,
    pub morita: bool,
}

/// Decomposes `I(G ⋉ S)` by conjugacy class.
pub fn morita_decompose_inertia(
    group: &Arc<FiniteGroup>,
    points: usize,
    act: impl Fn(usize, usize) -> usize,
) -> Result<(InertiaGroupoid, Vec<InertiaModel>), GroupoidError> {
    let base = Arc::new(FiniteGroupoid::translation(group, points, &act)?);
    let ix = InertiaGroupoid::new(&base)?;
    let conj = group.conjugacy();
    let mut models = Vec::with_capacity(conj.num_classes());
    for (class, &g) in conj.class_reps.iter().enumerate() {
        let emb = GroupEmbedding::subgroup(group, &conj.centralizers[class])
            .map_err(|e| GroupoidError::Mismatch(e.to_string()))?;
        let fixed: Vec<usize> = (0..points).filter(|&x| act(g, x) == x).collect();
        let fpos: HashMap<usize, usize> = fixed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let centralizer = emb.source();
        let component = Arc::new(FiniteGroupoid::translation(
            centralizer,
            fixed.len(),
            |c, x| fpos[&act(emb.map(c), fixed[x])],
        )?);
        let objects: Vec<usize> = (0..ix.groupoid.num_objects())
            .filter(|&o| conj.class_of[ix.loops[o] / points] == class)
            .collect();
        let (sub, inclusion) = ix.groupoid.restrict(&objects)?;
        let opos: HashMap<usize, usize> =
            objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let apos: HashMap<usize, usize> = (0..sub.num_arrows())
            .map(|a| (inclusion.arrow(a), a))
            .collect();
        let nf = fixed.len();
        let obj_map: Vec<usize> = fixed
            .iter()
            .map(|&x| opos[&ix.loop_index[&(g * points + x)]])
            .collect();
        let arrow_map: Vec<usize> = (0..component.num_arrows())
            .map(|a| {
                let (c, x) = (a / nf, a % nf);
                let o = ix.loop_index[&(g * points + fixed[x])];
                apos[&ix.arrow_index[&(o, emb.map(c) * points + fixed[x])]]
            })
            .collect();
        let iota = Functor::new(component.clone(), sub.clone(), obj_map, arrow_map)?;
        let equivalence = GeneralizedMorphism::comma(&iota)?;
        models.push(InertiaModel {
            class,
            element: g,
            centralizer_order: centralizer.order(),
            fixed_points: fixed,
            morita: equivalence.is_morita(),
            component,
            loops: objects.len(),
            equivalence,
        });
    }
    Ok((ix, models))
}
