//! Resolution of double points by blowing up.
//!
//! At a double point the tangent cone is a conic in the plane of tangent
//! directions. A smooth conic means `A1`; two lines mean `A_n` with `n >= 2`,
//! found by eliminating the two line directions; a double line is blown up
//! and the singular points on it (zeros of the cubic form along the line)
//! are resolved recursively.

use crate::classify::graph::{attach_double_line, Graph};
use crate::error::{Error, Result};
use crate::field::{upoly, Elem, Embedding, FieldSpec};
use crate::linalg::{complete_basis, dense_inverse, dense_kernel};
use crate::rdp::RdpType;
use crate::series::{Monomial, Ring, Series};

#[derive(Clone, Copy, Debug)]
pub struct ResolveConfig {
    /// Maximum number of nested blow-ups.
    pub max_depth: u32,
    /// Largest extension degree over the prime field used to locate points.
    pub max_extension: u32,
}

impl Default for ResolveConfig {
    fn default() -> Self {
        ResolveConfig { max_depth: 16, max_extension: 12 }
    }
}

/// Result of resolving one singular point.
#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub ty: RdpType,
    pub graph: Graph,
}

impl Node {
    fn not_rdp() -> Node {
        Node { ty: RdpType::NotRdp, graph: Graph::new() }
    }
}

/// Shape of the projectivized tangent cone of a double point.
enum Conic {
    Smooth,
    /// Two distinct lines meeting at the given direction.
    Lines(Vec<Elem>),
    /// A double line; the two vectors span it.
    DoubleLine(Vec<Elem>, Vec<Elem>),
}

fn quad_coeffs(q: &Series) -> [[Elem; 3]; 3] {
    let mut a = [[0; 3]; 3];
    for &(m, c) in q.terms() {
        let idx: Vec<usize> = (0..3).flat_map(|i| std::iter::repeat_n(i, m.exp(i) as usize)).collect();
        a[idx[0]][idx[1]] = c;
    }
    a
}

fn eval_quad(k: &FieldSpec, a: &[[Elem; 3]; 3], v: &[Elem]) -> Elem {
    let mut acc = 0;
    for i in 0..3 {
        for j in i..3 {
            acc = k.add(acc, k.mul(a[i][j], k.mul(v[i], v[j])));
        }
    }
    acc
}

fn analyse_conic(k: &FieldSpec, q: &Series) -> Conic {
    let a = quad_coeffs(q);
    if k.p() != 2 {
        let half = k.inv(2).expect("odd characteristic");
        let m: Vec<Vec<Elem>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Equal => a[i][i],
                        std::cmp::Ordering::Less => k.mul(a[i][j], half),
                        std::cmp::Ordering::Greater => k.mul(a[j][i], half),
                    })
                    .collect()
            })
            .collect();
        let ker = dense_kernel(k, &m, 3);
        return match ker.len() {
            0 => Conic::Smooth,
            1 => Conic::Lines(ker[0].clone()),
            _ => Conic::DoubleLine(ker[0].clone(), ker[1].clone()),
        };
    }
    let alt: Vec<Vec<Elem>> = (0..3)
        .map(|i| (0..3).map(|j| if i < j { a[i][j] } else if j < i { a[j][i] } else { 0 }).collect())
        .collect();
    let rad = dense_kernel(k, &alt, 3);
    if rad.len() == 1 {
        if eval_quad(k, &a, &rad[0]) == 0 {
            Conic::Lines(rad[0].clone())
        } else {
            Conic::Smooth
        }
    } else {
        // q is the square of a linear form
        let l: Vec<Elem> = (0..3).map(|i| k.frobenius_root(a[i][i])).collect();
        let w = dense_kernel(k, &[l], 3);
        Conic::DoubleLine(w[0].clone(), w[1].clone())
    }
}

/// Linear substitution `x_i -> sum_j cols[j][i] x_j`.
fn linear_change(f: &Series, cols: &[Vec<Elem>]) -> Result<Series> {
    let ring = f.ring();
    let images: Vec<Series> = (0..3)
        .map(|i| Series::from_terms(ring, (0..3).map(|j| (Monomial::var(j), cols[j][i])), f.order()))
        .collect();
    f.substitute(&images, f.order())
}

/// `n` for a germ whose tangent cone is two lines through the direction `s`.
fn a_index(f: &Series, s: &[Elem]) -> Result<u32> {
    let k = f.field().clone();
    let ring = f.ring().clone();
    let mut cols = complete_basis(&k, &[s.to_vec()], 3);
    let vertex = cols.remove(0);
    cols.push(vertex);
    let g = linear_change(f, &cols)?;
    let q = g.homogeneous_part(2);
    let (xx, xy, yy) = (
        q.coeff(&Monomial::new(&[2, 0, 0])),
        q.coeff(&Monomial::new(&[1, 1, 0])),
        q.coeff(&Monomial::new(&[0, 2, 0])),
    );
    let jac = vec![vec![k.mul(2, xx), xy], vec![xy, k.mul(2, yy)]];
    let jinv = dense_inverse(&k, &jac).ok_or_else(|| Error::Precondition("degenerate line pair".into()))?;
    let order = g.order() - 1;
    let grad = [g.derivative(0), g.derivative(1)];
    let z = Series::var(&ring, 2, order);
    let mut sol = [Series::zero(&ring, order), Series::zero(&ring, order)];
    for _ in 0..=order + 2 {
        let images = [sol[0].clone(), sol[1].clone(), z.clone()];
        let res: Vec<Series> = grad.iter().map(|gi| gi.substitute(&images, order)).collect::<Result<_>>()?;
        let next: Vec<Series> = (0..2)
            .map(|i| sol[i].sub(&res[0].scale(jinv[i][0])).sub(&res[1].scale(jinv[i][1])))
            .collect();
        if next[0] == sol[0] && next[1] == sol[1] {
            break;
        }
        sol = [next[0].clone(), next[1].clone()];
    }
    let restricted = g.substitute(&[sol[0].clone(), sol[1].clone(), z], order)?;
    match restricted.valuation() {
        Some(v) => Ok(v - 1),
        None => Err(Error::Inconclusive { order: order.max(0) as u32 }),
    }
}

/// Blow-up chart centred at the tangent direction `point`: `x_v = v`,
/// `x_j = v (u_j + point_j)`, followed by division by `v^2`.
fn chart(f: &Series, point: &[Elem]) -> Series {
    let k = f.field().clone();
    let ring = f.ring().clone();
    let v = (0..3).find(|&i| point[i] != 0).expect("nonzero direction");
    let inv = k.inv(point[v]).unwrap();
    let pt: Vec<Elem> = point.iter().map(|&c| k.mul(c, inv)).collect();
    let order = f.order() - 2;
    let mut acc = Series::zero(&ring, order);
    let top = f.degree().unwrap_or(0).min(f.order().max(0) as u32);
    for d in 2..=top {
        let part = f.homogeneous_part(d);
        if part.is_zero() {
            continue;
        }
        let room = order - (d as i32 - 2);
        if room < 0 {
            break;
        }
        let images: Vec<Series> = (0..3)
            .map(|j| {
                if j == v {
                    Series::one(&ring, room)
                } else {
                    Series::from_terms(&ring, [(Monomial::ONE, pt[j]), (Monomial::var(j), 1)], room)
                }
            })
            .collect();
        let dehom = part.with_order(room).substitute_polynomial(&images, room).expect("orders match");
        acc = acc.add(&dehom.mul_monomial(&Monomial::var(v).scale(d - 2), 1).with_order(order));
    }
    acc.with_order(order)
}

/// Coefficients (low to high in `t`) of the cubic form on the line `w1 + t w2`.
fn cubic_on_line(f3: &Series, w1: &[Elem], w2: &[Elem]) -> Vec<Elem> {
    let k = f3.field().clone();
    let line = Ring::new(k.clone(), &["t"]).expect("ring");
    let images: Vec<Series> = (0..3)
        .map(|i| Series::from_terms(&line, [(Monomial::ONE, w1[i]), (Monomial::var(0), w2[i])], 3))
        .collect();
    let c = f3.with_order(3).substitute_polynomial(&images, 3).expect("exact");
    (0..=3).map(|e| c.coeff(&Monomial::new(&[e]))).collect()
}

fn extend(f: &Series, degree: u32, cfg: &ResolveConfig) -> Result<(Series, Embedding)> {
    let k = f.field().clone();
    let target_k = k.k() * degree;
    if target_k > cfg.max_extension {
        return Err(Error::OutOfRange(format!("point field F_{}^{} exceeds the extension ceiling", k.p(), target_k)));
    }
    let big = FieldSpec::new(k.p(), target_k)?;
    let emb = Embedding::new(k, big.clone())?;
    let ring = f.ring().with_field(big);
    Ok((f.extend_field(&emb, &ring), emb))
}

pub(crate) fn resolve(f: &Series, depth: u32, cfg: &ResolveConfig) -> Result<Node> {
    if depth > cfg.max_depth {
        return Err(Error::DepthExceeded(cfg.max_depth));
    }
    let Some(mult) = f.valuation() else {
        return Err(Error::Inconclusive { order: f.order().max(0) as u32 });
    };
    match mult {
        0 | 1 => return Ok(Node { ty: RdpType::Smooth, graph: Graph::new() }),
        2 => {}
        _ => return Ok(Node::not_rdp()),
    }
    if f.order() < 3 {
        return Err(Error::Inconclusive { order: f.order().max(0) as u32 });
    }
    let k = f.field().clone();
    match analyse_conic(&k, &f.homogeneous_part(2)) {
        Conic::Smooth => Ok(Node { ty: RdpType::a(1), graph: Graph::chain(1) }),
        Conic::Lines(s) => {
            let n = a_index(f, &s)?;
            Ok(Node { ty: RdpType::a(n), graph: Graph::chain(n as usize) })
        }
        Conic::DoubleLine(w1, w2) => double_line(f, &w1, &w2, depth, cfg),
    }
}

fn double_line(f: &Series, w1: &[Elem], w2: &[Elem], depth: u32, cfg: &ResolveConfig) -> Result<Node> {
    let k = f.field().clone();
    let cubic = upoly::trim(cubic_on_line(&f.homogeneous_part(3), w1, w2));
    if cubic.is_empty() {
        return Ok(Node::not_rdp());
    }
    // points as (direction, number of conjugates, series over the point's field)
    let mut points: Vec<(Vec<Elem>, u32, Series)> = Vec::new();
    let at = |t: Elem, field: &FieldSpec, a: &[Elem], b: &[Elem]| -> Vec<Elem> {
        (0..3).map(|i| field.add(a[i], field.mul(t, b[i]))).collect()
    };
    if cubic.len() < 4 {
        points.push((w2.to_vec(), 1, f.clone()));
    }
    let mut rest = cubic.clone();
    for r in k.roots(&cubic) {
        points.push((at(r, &k, w1, w2), 1, f.clone()));
        while rest.len() > 1 && upoly::eval(&k, &rest, r) == 0 {
            rest = upoly::divrem(&k, &rest, &[k.neg(r), 1]).0;
        }
    }
    if rest.len() > 2 {
        let degree = (rest.len() - 1) as u32;
        let (big_f, emb) = extend(f, degree, cfg)?;
        let big = emb.target.clone();
        let rest_big: Vec<Elem> = rest.iter().map(|&c| emb.map(c)).collect();
        let root = *big.roots(&rest_big).first().ok_or_else(|| Error::Precondition("irreducible factor has no root".into()))?;
        let a: Vec<Elem> = w1.iter().map(|&c| emb.map(c)).collect();
        let b: Vec<Elem> = w2.iter().map(|&c| emb.map(c)).collect();
        points.push((at(root, &big, &a, &b), degree, big_f));
    }
    let mut children: Vec<(RdpType, Graph)> = Vec::new();
    for (dir, copies, germ) in points {
        let child = resolve(&chart(&germ, &dir), depth + 1, cfg)?;
        match child.ty {
            RdpType::NotRdp => return Ok(Node::not_rdp()),
            RdpType::Smooth => {}
            ty => {
                for _ in 0..copies {
                    children.push((ty, child.graph.clone()));
                }
            }
        }
    }
    Ok(match attach_double_line(&children) {
        Some((ty, graph)) => Node { ty, graph },
        None => Node::not_rdp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;
    use crate::parse::parse_series;

    fn three_var_ring(k: &Arc<FieldSpec>) -> Arc<Ring> {
        Ring::new(k.clone(), &["x", "y", "z"]).unwrap()
    }

    fn kind(p: u64, f: &str, n: i32) -> RdpType {
        let r = three_var_ring(&FieldSpec::prime(p).unwrap());
        let s = parse_series(f, &r, n).unwrap();
        resolve(&s, 0, &ResolveConfig::default()).unwrap().ty
    }

    #[test]
    fn standard_forms() {
        for p in [2, 3, 5, 7] {
            assert_eq!(kind(p, "x*y+z^2", 12), RdpType::a(1));
            assert_eq!(kind(p, "x*y+z^7", 12), RdpType::a(6));
            assert_eq!(kind(p, "x^2+y^3+z^5", 16), RdpType::e(8, None), "E8 p={p}");
            assert_eq!(kind(p, "x^2+y^3+y*z^3", 16), RdpType::e(7, None), "E7 p={p}");
        }
        for p in [3, 5, 7] {
            assert_eq!(kind(p, "z^2+x^3+y^4", 16), RdpType::e(6, None), "E6 p={p}");
        }
        assert_eq!(kind(2, "z^2+x^3+y^2*z", 16), RdpType::e(6, None));
        for p in [3, 5, 7] {
            assert_eq!(kind(p, "x^2+y^2*z+z^3", 16), RdpType::d(4, None));
            assert_eq!(kind(p, "x^2+y^2*z+z^6", 16), RdpType::d(7, None));
        }
        assert_eq!(kind(2, "z^2+x^2*y+x*y^3", 16), RdpType::d(6, None));
        assert_eq!(kind(2, "x^2+y*z^2+x*y^3", 16), RdpType::d(7, None));
        assert_eq!(kind(3, "x^2+y^3+z^3", 16), RdpType::NotRdp);
        assert_eq!(kind(5, "x^2+y^4+z^4", 16), RdpType::NotRdp);
    }

    #[test]
    fn conjugate_points() {
        // D4 whose three branch directions are only defined over F_8
        assert_eq!(kind(2, "z^2+x^3+x*y^2+y^3", 16), RdpType::d(4, None));
        // x^2 + y^2 + ... irreducible over F_3 (A1 with conjugate lines)
        assert_eq!(kind(3, "x^2+y^2+z^4", 12), RdpType::a(3));
    }
}
