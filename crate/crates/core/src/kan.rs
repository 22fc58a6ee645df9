//! Restriction along an inclusion of subfamilies and its two adjoints.
//!
//! Objects are contravariant, so the left Kan extension at an ambient class
//! `H` is a colimit over the quotients `α: H ↠ G` with `G` in the subfamily,
//! and the right Kan extension is a limit over the `α: G ↠ H` with `G` in the
//! subfamily. Both are computed as a two-term complex of direct sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{q, RationalMatrix, Subspace};
use crate::family::{ClassIdx, HomIdx, Inclusion};
use crate::rep::{
    cokernel, hom_space, kernel, tensor, Rep, RepMorphism, SesReport, ShortExactSequence,
};

fn check_sub(i: &Inclusion, x: &Rep) -> Result<()> {
    if **x.family() != *i.sub {
        return Err(Error::FamilyMismatch);
    }
    Ok(())
}

fn check_ambient(i: &Inclusion, y: &Rep) -> Result<()> {
    if **y.family() != *i.ambient {
        return Err(Error::FamilyMismatch);
    }
    Ok(())
}

/// `i^*`: values and transitions copied along the inclusion.
pub fn restrict(i: &Inclusion, y: &Rep) -> Result<Rep> {
    check_ambient(i, y)?;
    let dims = i.object_map.iter().map(|&c| y.dim(c)).collect();
    Rep::from_fn(i.sub.clone(), dims, |h| y.transition(i.hom_map[h]).clone())
}

pub fn restrict_morphism(i: &Inclusion, f: &RepMorphism) -> Result<RepMorphism> {
    let source = restrict(i, f.source())?;
    let target = restrict(i, f.target())?;
    let components = i
        .object_map
        .iter()
        .map(|&c| f.component(c).clone())
        .collect();
    RepMorphism::new(source, target, components)
}

/// Indexing diagram of the pointwise Kan formula at one ambient class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommaDiagram {
    pub target: ClassIdx,
    /// `(sub class G, ambient hom)`: `H ↠ G` for the left extension, `G ↠ H` for the right.
    pub nodes: Vec<(ClassIdx, HomIdx)>,
    /// `(from, to, sub hom β)`.
    pub edges: Vec<(usize, usize, HomIdx)>,
}

/// Nodes `α: H ↠ i(G)`; an edge `(G, β∘α') -> (G', α')` for every `β: G' ↠ G`.
pub fn left_comma(i: &Inclusion, h: ClassIdx) -> CommaDiagram {
    let amb = &i.ambient;
    let mut nodes = Vec::new();
    for (g, &ga) in i.object_map.iter().enumerate() {
        for &alpha in amb.homs(h, ga) {
            nodes.push((g, alpha));
        }
    }
    let index = |g: ClassIdx, a: HomIdx| nodes.iter().position(|&n| n == (g, a)).expect("node");
    let mut edges = Vec::new();
    for (to, &(g2, a2)) in nodes.iter().enumerate() {
        for (beta, hb) in i.sub.homs_iter() {
            if hb.source == g2 {
                let from = index(hb.target, amb.compose(i.hom_map[beta], a2));
                edges.push((from, to, beta));
            }
        }
    }
    CommaDiagram {
        target: h,
        nodes,
        edges,
    }
}

/// Nodes `α: i(G) ↠ H`; an edge `(G, α) -> (G', α∘β)` for every `β: G' ↠ G`.
pub fn right_comma(i: &Inclusion, h: ClassIdx) -> CommaDiagram {
    let amb = &i.ambient;
    let mut nodes = Vec::new();
    for (g, &ga) in i.object_map.iter().enumerate() {
        for &alpha in amb.homs(ga, h) {
            nodes.push((g, alpha));
        }
    }
    let index = |g: ClassIdx, a: HomIdx| nodes.iter().position(|&n| n == (g, a)).expect("node");
    let mut edges = Vec::new();
    for (from, &(g, a)) in nodes.iter().enumerate() {
        for (beta, hb) in i.sub.homs_iter() {
            if hb.target == g {
                let to = index(hb.source, amb.compose(a, i.hom_map[beta]));
                edges.push((from, to, beta));
            }
        }
    }
    CommaDiagram {
        target: h,
        nodes,
        edges,
    }
}

/// The node sum `⊕ X(G)` at one class, with the presentation of the (co)limit.
struct Pointwise {
    diagram: CommaDiagram,
    offsets: Vec<usize>,
    total: usize,
    /// Left: coordinates of the colimit, `dim x total`. Right: inclusion of the limit, `total x dim`.
    map: RationalMatrix,
    /// Left: a section `total x dim`. Right: coordinates in the limit, `dim x total`.
    back: RationalMatrix,
}

fn offsets(x: &Rep, d: &CommaDiagram) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(d.nodes.len());
    let mut total = 0;
    for &(g, _) in &d.nodes {
        offsets.push(total);
        total += x.dim(g);
    }
    (offsets, total)
}

fn left_pointwise(i: &Inclusion, x: &Rep, h: ClassIdx) -> Result<Pointwise> {
    let diagram = left_comma(i, h);
    let (offsets, total) = offsets(x, &diagram);
    let mut relations = Vec::new();
    for &(from, to, beta) in &diagram.edges {
        let g = diagram.nodes[from].0;
        let xb = x.transition(beta);
        for c in 0..x.dim(g) {
            let mut v = vec![q(0); total];
            for r in 0..xb.rows() {
                v[offsets[to] + r] += xb.get(r, c);
            }
            v[offsets[from] + c] -= q(1);
            relations.push(v);
        }
    }
    let rel = Subspace::span(total, &relations);
    Ok(Pointwise {
        diagram,
        offsets,
        total,
        map: rel.quotient_map(),
        back: rel.quotient_section(),
    })
}

fn right_pointwise(i: &Inclusion, x: &Rep, h: ClassIdx) -> Result<Pointwise> {
    let diagram = right_comma(i, h);
    let (offsets, total) = offsets(x, &diagram);
    let mut constraint = RationalMatrix::zeros(0, total);
    for &(from, to, beta) in &diagram.edges {
        let g2 = diagram.nodes[to].0;
        let mut rows = RationalMatrix::zeros(x.dim(g2), total);
        rows.paste(0, offsets[from], x.transition(beta));
        let minus = RationalMatrix::identity(x.dim(g2)).scale(&q(-1));
        let mut diagonal = RationalMatrix::zeros(x.dim(g2), total);
        diagonal.paste(0, offsets[to], &minus);
        constraint = constraint.vstack(&rows.add(&diagonal)?)?;
    }
    let lim = constraint.kernel();
    let map = lim.inclusion();
    // The basis is in reduced echelon form, so coordinates sit at the pivots.
    let mut coords = RationalMatrix::zeros(lim.dim(), total);
    for (k, &p) in lim.pivots().iter().enumerate() {
        coords.set(k, p, q(1));
    }
    Ok(Pointwise {
        diagram,
        offsets,
        total,
        map,
        back: coords,
    })
}

fn value_dim_left(p: &Pointwise) -> usize {
    p.map.rows()
}

fn value_dim_right(p: &Pointwise) -> usize {
    p.map.cols()
}

/// Node-sum map at `H'` induced by `γ: H' ↠ H`.
fn left_node_map(
    i: &Inclusion,
    from: &Pointwise,
    to: &Pointwise,
    gamma: HomIdx,
    x: &Rep,
) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(to.total, from.total);
    for (k, &(g, alpha)) in from.diagram.nodes.iter().enumerate() {
        let target = (g, i.ambient.compose(alpha, gamma));
        let t = to
            .diagram
            .nodes
            .iter()
            .position(|&n| n == target)
            .expect("node");
        m.paste(
            to.offsets[t],
            from.offsets[k],
            &RationalMatrix::identity(x.dim(g)),
        );
    }
    m
}

/// Node-sum map `∏_{(G, α: G ↠ H)} -> ∏_{(G, α': G ↠ H')}` reading `x'_{(G,α')} = x_{(G, γ∘α')}`.
fn right_node_map(
    i: &Inclusion,
    from: &Pointwise,
    to: &Pointwise,
    gamma: HomIdx,
    x: &Rep,
) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(to.total, from.total);
    for (k, &(g, alpha)) in to.diagram.nodes.iter().enumerate() {
        let source = (g, i.ambient.compose(gamma, alpha));
        let s = from
            .diagram
            .nodes
            .iter()
            .position(|&n| n == source)
            .expect("node");
        m.paste(
            to.offsets[k],
            from.offsets[s],
            &RationalMatrix::identity(x.dim(g)),
        );
    }
    m
}

struct Extension {
    rep: Rep,
    points: Vec<Pointwise>,
}

fn left_general(i: &Inclusion, x: &Rep) -> Result<Extension> {
    check_sub(i, x)?;
    let amb = &i.ambient;
    let points: Vec<Pointwise> = (0..amb.num_classes())
        .map(|h| left_pointwise(i, x, h))
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = points.iter().map(value_dim_left).collect();
    let transitions = amb
        .homs_iter()
        .map(|(gamma, hom)| {
            let (from, to) = (&points[hom.target], &points[hom.source]);
            to.map
                .mul(&left_node_map(i, from, to, gamma, x))?
                .mul(&from.back)
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = Rep::from_parts(amb.clone(), dims, transitions)?;
    Ok(Extension { rep, points })
}

fn right_general(i: &Inclusion, x: &Rep) -> Result<Extension> {
    check_sub(i, x)?;
    let amb = &i.ambient;
    let points: Vec<Pointwise> = (0..amb.num_classes())
        .map(|h| right_pointwise(i, x, h))
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = points.iter().map(value_dim_right).collect();
    let transitions = amb
        .homs_iter()
        .map(|(gamma, hom)| {
            let (from, to) = (&points[hom.target], &points[hom.source]);
            to.back
                .mul(&right_node_map(i, from, to, gamma, x))?
                .mul(&from.map)
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = Rep::from_parts(amb.clone(), dims, transitions)?;
    Ok(Extension { rep, points })
}

/// Left Kan extension by the pointwise colimit formula, for any inclusion.
pub fn left_kan_general(i: &Inclusion, x: &Rep) -> Result<Rep> {
    Ok(left_general(i, x)?.rep)
}

/// Right Kan extension by the pointwise limit formula, for any inclusion.
pub fn right_kan_general(i: &Inclusion, x: &Rep) -> Result<Rep> {
    Ok(right_general(i, x)?.rep)
}

/// `X` on the image of the inclusion, zero elsewhere.
pub fn extend_by_zero(i: &Inclusion, x: &Rep) -> Result<Rep> {
    check_sub(i, x)?;
    let amb = &i.ambient;
    let dims: Vec<usize> = (0..amb.num_classes())
        .map(|c| i.sub_class(c).map_or(0, |s| x.dim(s)))
        .collect();
    Rep::from_fn(amb.clone(), dims.clone(), |h| match i.sub_hom(h) {
        Some(s) => x.transition(s).clone(),
        None => {
            let hom = amb.hom(h);
            RationalMatrix::zeros(dims[hom.source], dims[hom.target])
        }
    })
}

/// `i_!`: extension by zero for up-closed inclusions, the colimit formula otherwise.
pub fn left_kan(i: &Inclusion, x: &Rep) -> Result<Rep> {
    if i.is_up_closed {
        extend_by_zero(i, x)
    } else {
        left_kan_general(i, x)
    }
}

/// `i_*`: extension by zero for down-closed inclusions, the limit formula otherwise.
pub fn right_kan(i: &Inclusion, x: &Rep) -> Result<Rep> {
    if i.is_down_closed {
        extend_by_zero(i, x)
    } else {
        right_kan_general(i, x)
    }
}

/// `i_!` on a morphism, through the colimit formula.
pub fn left_kan_morphism(i: &Inclusion, f: &RepMorphism) -> Result<RepMorphism> {
    let a = left_general(i, f.source())?;
    let b = left_general(i, f.target())?;
    let components = (0..i.ambient.num_classes())
        .map(|h| {
            let (pa, pb) = (&a.points[h], &b.points[h]);
            let blocks: Vec<RationalMatrix> = pa
                .diagram
                .nodes
                .iter()
                .map(|&(g, _)| f.component(g).clone())
                .collect();
            pb.map
                .mul(&RationalMatrix::block_diagonal(&blocks))?
                .mul(&pa.back)
        })
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::new(a.rep, b.rep, components)
}

/// `i_*` on a morphism, through the limit formula.
pub fn right_kan_morphism(i: &Inclusion, f: &RepMorphism) -> Result<RepMorphism> {
    let a = right_general(i, f.source())?;
    let b = right_general(i, f.target())?;
    let components = (0..i.ambient.num_classes())
        .map(|h| {
            let (pa, pb) = (&a.points[h], &b.points[h]);
            let blocks: Vec<RationalMatrix> = pa
                .diagram
                .nodes
                .iter()
                .map(|&(g, _)| f.component(g).clone())
                .collect();
            pb.back
                .mul(&RationalMatrix::block_diagonal(&blocks))?
                .mul(&pa.map)
        })
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::new(a.rep, b.rep, components)
}

/// `X -> i^* i_! X`: the node `(G, id)`.
pub fn left_unit(i: &Inclusion, x: &Rep) -> Result<RepMorphism> {
    let ext = left_general(i, x)?;
    let target = restrict(i, &ext.rep)?;
    let components = (0..i.sub.num_classes())
        .map(|g| {
            let p = &ext.points[i.object_map[g]];
            let id = i.ambient.identity(i.object_map[g]);
            let k = p
                .diagram
                .nodes
                .iter()
                .position(|&n| n == (g, id))
                .expect("identity node");
            let mut inc = RationalMatrix::zeros(p.total, x.dim(g));
            inc.paste(p.offsets[k], 0, &RationalMatrix::identity(x.dim(g)));
            p.map.mul(&inc)
        })
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::new(x.clone(), target, components)
}

/// `i_! i^* Y -> Y`: `y` at node `(G, α)` goes to `Y(α) y`.
pub fn left_counit(i: &Inclusion, y: &Rep) -> Result<RepMorphism> {
    let ry = restrict(i, y)?;
    let ext = left_general(i, &ry)?;
    let components = (0..i.ambient.num_classes())
        .map(|h| {
            let p = &ext.points[h];
            let mut m = RationalMatrix::zeros(y.dim(h), p.total);
            for (k, &(_, alpha)) in p.diagram.nodes.iter().enumerate() {
                m.paste(0, p.offsets[k], y.transition(alpha));
            }
            m.mul(&p.back)
        })
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::new(ext.rep, y.clone(), components)
}

/// `Y -> i_* i^* Y`: `y ↦ (Y(α) y)` over the nodes `α: G ↠ H`.
pub fn right_unit(i: &Inclusion, y: &Rep) -> Result<RepMorphism> {
    let ry = restrict(i, y)?;
    let ext = right_general(i, &ry)?;
    let components = (0..i.ambient.num_classes())
        .map(|h| {
            let p = &ext.points[h];
            let mut m = RationalMatrix::zeros(p.total, y.dim(h));
            for (k, &(_, alpha)) in p.diagram.nodes.iter().enumerate() {
                m.paste(p.offsets[k], 0, y.transition(alpha));
            }
            p.back.mul(&m)
        })
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::new(y.clone(), ext.rep, components)
}

/// `i^* i_* X -> X`: the component at the node `(G, id)`.
pub fn right_counit(i: &Inclusion, x: &Rep) -> Result<RepMorphism> {
    let ext = right_general(i, x)?;
    let source = restrict(i, &ext.rep)?;
    let components = (0..i.sub.num_classes())
        .map(|g| {
            let p = &ext.points[i.object_map[g]];
            let id = i.ambient.identity(i.object_map[g]);
            let k = p
                .diagram
                .nodes
                .iter()
                .position(|&n| n == (g, id))
                .expect("identity node");
            let mut proj = RationalMatrix::zeros(x.dim(g), p.total);
            proj.paste(0, p.offsets[k], &RationalMatrix::identity(x.dim(g)));
            proj.mul(&p.map)
        })
        .collect::<Result<Vec<_>>>()?;
    RepMorphism::new(source, x.clone(), components)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjunctionReport {
    /// `dim Hom(i_! X, Y)` and `dim Hom(X, i^* Y)`.
    pub left_dims: (usize, usize),
    /// `dim Hom(i^* Y, X)` and `dim Hom(Y, i_* X)`.
    pub right_dims: (usize, usize),
    pub left_triangles: bool,
    pub right_triangles: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.left_dims.0 == self.left_dims.1
            && self.right_dims.0 == self.right_dims.1
            && self.left_triangles
            && self.right_triangles
    }
}

fn is_identity(f: &RepMorphism) -> bool {
    f.source() == f.target()
        && f.components()
            .iter()
            .all(|m| *m == RationalMatrix::identity(m.rows()))
}

/// Hom-dimension identities for both adjunctions and the four triangle identities.
pub fn adjunction_check(i: &Inclusion, x: &Rep, y: &Rep) -> Result<AdjunctionReport> {
    check_sub(i, x)?;
    check_ambient(i, y)?;
    let lx = left_kan_general(i, x)?;
    let rx = right_kan_general(i, x)?;
    let ry = restrict(i, y)?;
    let left_dims = (
        hom_space(&lx, y, None)?.len(),
        hom_space(x, &ry, None)?.len(),
    );
    let right_dims = (
        hom_space(&ry, x, None)?.len(),
        hom_space(y, &rx, None)?.len(),
    );

    // ε_{i_! X} ∘ i_!(η_X) = id and i^*(ε_Y) ∘ η_{i^* Y} = id.
    let eta_x = left_unit(i, x)?;
    let first = left_counit(i, &lx)?.compose(&left_kan_morphism(i, &eta_x)?)?;
    let second = restrict_morphism(i, &left_counit(i, y)?)?.compose(&left_unit(i, &ry)?)?;
    let left_triangles = is_identity(&first) && is_identity(&second);

    // i_*(ε_X) ∘ η_{i_* X} = id and ε_{i^* Y} ∘ i^*(η_Y) = id.
    let first = right_kan_morphism(i, &right_counit(i, x)?)?.compose(&right_unit(i, &rx)?)?;
    let second = right_counit(i, &ry)?.compose(&restrict_morphism(i, &right_unit(i, y)?)?)?;
    let right_triangles = is_identity(&first) && is_identity(&second);

    Ok(AdjunctionReport {
        left_dims,
        right_dims,
        left_triangles,
        right_triangles,
    })
}

pub struct Gluing {
    pub ses: ShortExactSequence,
    pub report: SesReport,
}

/// `j_! j^* X ↣ X ↠ i_* i^* X` for a down-closed `i` and its up-closed complement `j`.
pub fn glue_ses(down: &Inclusion, up: &Inclusion, x: &Rep) -> Result<Gluing> {
    check_ambient(down, x)?;
    check_ambient(up, x)?;
    let (a, b) = (down.image(), up.image());
    if !down.is_down_closed || !up.is_up_closed {
        return Err(Error::NotAPartition(
            "expected a down-closed and an up-closed part".into(),
        ));
    }
    if !a.is_disjoint(&b) || a.len() + b.len() != x.family().num_classes() {
        return Err(Error::NotAPartition(
            "class sets overlap or miss a class".into(),
        ));
    }
    let mono = left_counit(up, x)?;
    let epi = right_unit(down, x)?;
    let ses = ShortExactSequence::new(mono, epi)?;
    let report = ses.verify();
    Ok(Gluing { ses, report })
}

pub struct OplaxComparison {
    /// `i_!(X ⊗ Y) -> i_! X ⊗ i_! Y`.
    pub h: RepMorphism,
    pub kernel: Rep,
    pub cokernel: Rep,
}

impl OplaxComparison {
    /// Kernel and cokernel vanish on the subfamily.
    pub fn vanishes_on_sub(&self, i: &Inclusion) -> Result<bool> {
        Ok(restrict(i, &self.kernel)?.is_zero() && restrict(i, &self.cokernel)?.is_zero())
    }
}

/// `[x ⊗ y]_{(G,α)} ↦ [x]_{(G,α)} ⊗ [y]_{(G,α)}`.
pub fn oplax_comparison(i: &Inclusion, x: &Rep, y: &Rep) -> Result<OplaxComparison> {
    check_sub(i, y)?;
    let xy = tensor(x, y)?;
    let lxy = left_general(i, &xy)?;
    let lx = left_general(i, x)?;
    let ly = left_general(i, y)?;
    let target = tensor(&lx.rep, &ly.rep)?;
    let components = (0..i.ambient.num_classes())
        .map(|h| {
            let (p, px, py) = (&lxy.points[h], &lx.points[h], &ly.points[h]);
            let mut m = RationalMatrix::zeros(target.dim(h), p.total);
            for (k, &(g, _)) in p.diagram.nodes.iter().enumerate() {
                let cx = px.map.block(0, px.offsets[k], px.map.rows(), x.dim(g));
                let cy = py.map.block(0, py.offsets[k], py.map.rows(), y.dim(g));
                m.paste(0, p.offsets[k], &cx.kron(&cy));
            }
            m.mul(&p.back)
        })
        .collect::<Result<Vec<_>>>()?;
    let h = RepMorphism::new(lxy.rep, target, components)?;
    let (kernel, _) = kernel(&h)?;
    let (cokernel, _) = cokernel(&h)?;
    Ok(OplaxComparison {
        h,
        kernel,
        cokernel,
    })
}

#[cfg(test)]
mod tests;
