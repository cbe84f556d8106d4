//! Polynomial invariants as state sums over spanning subgraphs.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::LaurentPoly;
use crate::error::{Error, Result};
use crate::fatgraph::{AbstractGraph, Fatgraph, StateStats, DEFAULT_MAX_EDGES};

/// Sums `term(key)` over all states, grouping states that share a key.
fn fatgraph_sum<K: Ord>(
    fg: &Fatgraph,
    key: impl Fn(&StateStats) -> K,
    term: impl Fn(&K) -> LaurentPoly,
) -> Result<LaurentPoly> {
    let mut counts: BTreeMap<K, u64> = BTreeMap::new();
    for st in fg.states()? {
        *counts.entry(key(&st.stats)).or_default() += 1;
    }
    Ok(collect(counts, term))
}

fn graph_sum<K: Ord>(
    g: &AbstractGraph,
    key: impl Fn(usize, usize) -> K,
    term: impl Fn(&K) -> LaurentPoly,
) -> Result<LaurentPoly> {
    let e = g.num_edges();
    if e > DEFAULT_MAX_EDGES {
        return Err(Error::TooManyEdges {
            edges: e,
            cap: DEFAULT_MAX_EDGES,
        });
    }
    let mut counts: BTreeMap<K, u64> = BTreeMap::new();
    for mask in 0..1u64 << e {
        *counts
            .entry(key(mask.count_ones() as usize, g.components(mask)))
            .or_default() += 1;
    }
    Ok(collect(counts, term))
}

fn collect<K>(counts: BTreeMap<K, u64>, term: impl Fn(&K) -> LaurentPoly) -> LaurentPoly {
    let mut total = LaurentPoly::zero();
    for (k, n) in counts {
        total += &term(&k).scale(&BigInt::from(n));
    }
    total
}

fn minus_q() -> LaurentPoly {
    LaurentPoly::monomial(&["q"], &[1], -1)
}

/// T(G,x,y) = Σ (x−1)^{r(G)−r(H)} (y−1)^{n(H)}.
pub fn tutte(g: &AbstractGraph) -> Result<LaurentPoly> {
    let kg = g.components(crate::fatgraph::full_mask(g.num_edges()));
    let xm = LaurentPoly::var("x") - LaurentPoly::one();
    let ym = LaurentPoly::var("y") - LaurentPoly::one();
    let v = g.n;
    let p = graph_sum(
        g,
        |e, k| (k - kg, e + k - v),
        |&(a, b)| &xm.pow(a as u32) * &ym.pow(b as u32),
    )?;
    Ok(p.over(&["x".to_string(), "y".to_string()]))
}

/// M(G,u) = Σ (−1)^{e(H)} u^{k(H)}.
pub fn chromatic(g: &AbstractGraph) -> Result<LaurentPoly> {
    let p = graph_sum(
        g,
        |e, k| (e % 2, k),
        |&(parity, k)| LaurentPoly::monomial(&["u"], &[k as i32], if parity == 0 { 1 } else { -1 }),
    )?;
    Ok(p.over(&["u".to_string()]))
}

/// Number of proper `k`-colourings by exhaustive enumeration.
pub fn colorings_oracle(g: &AbstractGraph, k: usize) -> Result<u64> {
    if g.n > 8 {
        return Err(Error::TooManyVertices {
            vertices: g.n,
            cap: 8,
        });
    }
    if k == 0 || k > 5 {
        return Err(Error::Polynomial(format!("colour count {k} outside 1..=5")));
    }
    let mut colour = vec![0usize; g.n];
    let mut count = 0;
    loop {
        if g.edges.iter().all(|&(a, b)| colour[a] != colour[b]) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == g.n {
                return Ok(count);
            }
            colour[i] += 1;
            if colour[i] < k {
                break;
            }
            colour[i] = 0;
            i += 1;
        }
    }
}

/// R(F,x,y,z) = Σ x^{r(F)−r(H)} y^{n(H)} z^{2g(H)}.
pub fn bollobas_riordan(fg: &Fatgraph) -> Result<LaurentPoly> {
    let kf = fg.components(fg.full_mask()).len();
    let p = fatgraph_sum(
        fg,
        |s| (s.k - kf, s.n, 2 * s.g),
        |&(a, b, c)| LaurentPoly::monomial(&["x", "y", "z"], &[a as i32, b as i32, c as i32], 1),
    )?;
    Ok(p.over(&["x".to_string(), "y".to_string(), "z".to_string()]))
}

/// Z(F,q) = (q+q⁻¹)^{e(F)} M(G,(q+q⁻¹)²), cross-checked against its state-sum form.
pub fn z_poly(fg: &Fatgraph) -> Result<LaurentPoly> {
    let b = LaurentPoly::balanced("q");
    let m = chromatic(&fg.underlying_graph())?;
    let lhs = &b.pow(fg.num_edges() as u32) * &m.substitute("u", &b.pow(2))?;
    let rhs = z_state_sum(fg)?;
    if lhs != rhs {
        return Err(Error::IdentityMismatch(format!(
            "Z(F,q): chromatic form {lhs} vs state sum {rhs}"
        )));
    }
    Ok(lhs.over(&["q".to_string()]))
}

/// (−1)^{e(F)} (q+q⁻¹)^{v(F)} Σ (q+q⁻¹)^{p+2g} (−q)^h (1+q⁻²)^h.
pub fn z_state_sum(fg: &Fatgraph) -> Result<LaurentPoly> {
    let b = LaurentPoly::balanced("q");
    let onep = LaurentPoly::one() + LaurentPoly::var_pow("q", -2);
    let inner = fatgraph_sum(
        fg,
        |s| (s.p + 2 * s.g, s.h),
        |&(a, h)| &b.pow(a as u32) * &(&minus_q() * &onep).pow(h as u32),
    )?;
    let sign = if fg.num_edges().is_multiple_of(2) {
        1
    } else {
        -1
    };
    Ok((&b.pow(fg.num_vertices() as u32) * &inner).scale(&BigInt::from(sign)))
}

/// Σ (q+q⁻¹)^{v+p+2g} (−q(1+q⁻²))^h, the unnormalized chromatic state sum.
pub fn z_tilde(fg: &Fatgraph) -> Result<LaurentPoly> {
    let b = LaurentPoly::balanced("q");
    let step = &minus_q() * &(LaurentPoly::one() + LaurentPoly::var_pow("q", -2));
    fatgraph_sum(
        fg,
        |s| (s.v + s.p + 2 * s.g, s.h),
        |&(a, h)| &b.pow(a as u32) * &step.pow(h as u32),
    )
    .map(|p| p.over(&["q".to_string()]))
}

/// R̂(F,q) = Σ (q+q⁻¹)^{v+p+2g} (−q)^h, checked against the specialization of R.
pub fn restricted_br(fg: &Fatgraph) -> Result<LaurentPoly> {
    let b = LaurentPoly::balanced("q");
    let rhat = fatgraph_sum(
        fg,
        |s| (s.v + s.p + 2 * s.g, s.h),
        |&(a, h)| &b.pow(a as u32) * &minus_q().pow(h as u32),
    )?
    .over(&["q".to_string()]);
    let specialized = br_specialization(fg)?;
    let sign = BigInt::from(if fg.num_edges().is_multiple_of(2) {
        1
    } else {
        -1
    });
    if specialized != rhat.scale(&sign) {
        return Err(Error::IdentityMismatch(format!(
            "R̂(F,q): specialized R gives {specialized}, state sum gives {rhat}"
        )));
    }
    Ok(rhat)
}

/// x^{k(F)} y^{v(F)} [−y⁻¹(xy)^{1/2}]^{e(F)} R(F,x,y,1) at x = −q(q+q⁻¹), y = −q⁻¹(q+q⁻¹).
pub fn br_specialization(fg: &Fatgraph) -> Result<LaurentPoly> {
    let b = LaurentPoly::balanced("q");
    let x = &minus_q() * &b;
    let y = &LaurentPoly::monomial(&["q"], &[-1], -1) * &b;
    // With the positive root (xy)^{1/2} = q+q⁻¹, the bracket −y⁻¹(xy)^{1/2} is q.
    let root = &(-&y) * &LaurentPoly::var("q");
    if root != b || &root * &root != &x * &y {
        return Err(Error::IdentityMismatch("−y⁻¹(xy)^{1/2} ≠ q".into()));
    }
    let r = bollobas_riordan(fg)?
        .evaluate("z", 1)?
        .substitute("x", &x)?
        .substitute("y", &y)?;
    let kf = fg.components(fg.full_mask()).len() as u32;
    let pref = &(&x.pow(kf) * &y.pow(fg.num_vertices() as u32))
        * &LaurentPoly::var_pow("q", fg.num_edges() as i32);
    Ok((&pref * &r).over(&["q".to_string()]))
}

/// R′(F_s,q,r,s) = Σ (q+q⁻¹)^{v+p} (r+r⁻¹)^{2g} (−q)^{h_s} (1+s⁻²)^{h_s}.
///
/// Since e₋(F) + e₊(H) − e₋(H) = h_s(H), this equals the normalized form
/// (−q−qs⁻²)^{e₋(F)} Σ (…)(−q(1+s⁻²))^{e₊(H)−e₋(H)} term by term.
pub fn r_prime_signed(fg: &Fatgraph) -> Result<LaurentPoly> {
    let bq = LaurentPoly::balanced("q");
    let br = LaurentPoly::balanced("r");
    let step = &minus_q() * &(LaurentPoly::one() + LaurentPoly::var_pow("s", -2));
    let p = fatgraph_sum(
        fg,
        |s| (s.v + s.p, 2 * s.g, s.hs),
        |&(a, g2, hs)| &(&bq.pow(a as u32) * &br.pow(g2 as u32)) * &step.pow(hs as u32),
    )?;
    Ok(p.over(&["q".to_string(), "r".to_string(), "s".to_string()]))
}

/// R̂′(F_s,q,r) = Σ (q+q⁻¹)^p (r+r⁻¹)^{2g} (−q)^{h_s}.
pub fn r_hat_prime_signed(fg: &Fatgraph) -> Result<LaurentPoly> {
    let bq = LaurentPoly::balanced("q");
    let br = LaurentPoly::balanced("r");
    let p = fatgraph_sum(
        fg,
        |s| (s.p, 2 * s.g, s.hs),
        |&(p, g2, hs)| &(&bq.pow(p as u32) * &br.pow(g2 as u32)) * &minus_q().pow(hs as u32),
    )?;
    Ok(p.over(&["q".to_string(), "r".to_string()]))
}

/// B(F,q,r) = Σ (1+r)^{k} (−q)^{e(H)} (q+q⁻¹)^p.
pub fn b_poly(fg: &Fatgraph) -> Result<LaurentPoly> {
    let bq = LaurentPoly::balanced("q");
    let opr = LaurentPoly::one() + LaurentPoly::var("r");
    let p = fatgraph_sum(
        fg,
        |s| (s.k, s.e, s.p),
        |&(k, e, p)| &(&opr.pow(k as u32) * &minus_q().pow(e as u32)) * &bq.pow(p as u32),
    )?;
    Ok(p.over(&["q".to_string(), "r".to_string()]))
}

/// M(G,1+r), the graded Euler characteristic of the component-algebra complex.
pub fn chromatic_one_plus_r(g: &AbstractGraph) -> Result<LaurentPoly> {
    let p = chromatic(g)?.substitute("u", &(LaurentPoly::one() + LaurentPoly::var("r")))?;
    Ok(p.over(&["r".to_string()]))
}

/// Σ (q+q⁻¹)^p (−q)^{h_s}, the unnormalized Jones state sum of the associated link.
pub fn khovanov_state_sum(fg: &Fatgraph) -> Result<LaurentPoly> {
    let g = fg.genus();
    if g != 0 {
        return Err(Error::NonzeroGenus(g));
    }
    let bq = LaurentPoly::balanced("q");
    let p = fatgraph_sum(
        fg,
        |s| (s.p, s.hs),
        |&(p, hs)| &bq.pow(p as u32) * &minus_q().pow(hs as u32),
    )?;
    Ok(p.over(&["q".to_string()]))
}

/// (−1)^{n₋} q^{n₊−2n₋} Σ (q+q⁻¹)^p (−q)^{h_s}.
pub fn jones(fg: &Fatgraph, n_minus: i32, n_plus: i32) -> Result<LaurentPoly> {
    let sign = if n_minus.rem_euclid(2) == 0 { 1 } else { -1 };
    let pref = LaurentPoly::monomial(&["q"], &[n_plus - 2 * n_minus], sign);
    Ok(&pref * &khovanov_state_sum(fg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatgraph::Sign;

    fn bq() -> LaurentPoly {
        LaurentPoly::balanced("q")
    }

    fn loop1() -> Fatgraph {
        Fatgraph::new(vec![vec![0, 1]], vec![Sign::Minus]).unwrap()
    }

    fn path() -> Fatgraph {
        Fatgraph::new(vec![vec![0], vec![1]], vec![Sign::Minus]).unwrap()
    }

    fn q() -> LaurentPoly {
        LaurentPoly::var("q")
    }

    #[test]
    fn tutte_examples() {
        let edge = AbstractGraph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(tutte(&edge).unwrap(), LaurentPoly::var("x"));
        let lp = AbstractGraph::new(1, vec![(0, 0)]).unwrap();
        assert_eq!(tutte(&lp).unwrap(), LaurentPoly::var("y"));
        let tri = AbstractGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let x = LaurentPoly::var("x");
        assert_eq!(tutte(&tri).unwrap(), x.pow(2) + x + LaurentPoly::var("y"));
    }

    #[test]
    fn chromatic_examples() {
        let u = LaurentPoly::var("u");
        assert_eq!(
            chromatic(&AbstractGraph::new(1, vec![]).unwrap()).unwrap(),
            u
        );
        assert_eq!(
            chromatic(&AbstractGraph::new(2, vec![(0, 1)]).unwrap()).unwrap(),
            u.pow(2) - u
        );
        assert!(
            chromatic(&AbstractGraph::new(2, vec![(0, 1), (1, 1)]).unwrap())
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn colorings_examples() {
        let tri = AbstractGraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(colorings_oracle(&tri, 3).unwrap(), 6);
        assert_eq!(
            colorings_oracle(&AbstractGraph::new(2, vec![(0, 1)]).unwrap(), 2).unwrap(),
            2
        );
        assert_eq!(
            colorings_oracle(&AbstractGraph::new(1, vec![(0, 0)]).unwrap(), 4).unwrap(),
            0
        );
    }

    #[test]
    fn br_examples() {
        assert_eq!(
            bollobas_riordan(&loop1()).unwrap(),
            LaurentPoly::one() + LaurentPoly::var("y")
        );
        let inter = Fatgraph::new(vec![vec![0, 2, 1, 3]], vec![Sign::Minus; 2]).unwrap();
        let r = bollobas_riordan(&inter).unwrap();
        assert_eq!(r.coeff(&[("y", 2), ("z", 2)]), BigInt::from(1));
    }

    #[test]
    fn z_examples() {
        let b = bq();
        assert_eq!(z_poly(&Fatgraph::empty(1)).unwrap(), b.pow(2));
        assert_eq!(
            z_poly(&path()).unwrap(),
            &b.pow(3) * &(b.pow(2) - LaurentPoly::one())
        );
        assert!(z_poly(&loop1()).unwrap().is_zero());
    }

    #[test]
    fn restricted_examples() {
        let b = bq();
        assert_eq!(restricted_br(&Fatgraph::empty(1)).unwrap(), b.pow(2));
        assert_eq!(restricted_br(&path()).unwrap(), b.pow(3) - &q() * &b.pow(4));
        assert_eq!(
            restricted_br(&loop1()).unwrap(),
            b.pow(3) - &q() * &b.pow(2)
        );
    }

    #[test]
    fn r_hat_prime_examples() {
        let b = bq();
        assert_eq!(r_hat_prime_signed(&Fatgraph::empty(1)).unwrap(), b);
        assert_eq!(
            r_hat_prime_signed(&path()).unwrap(),
            &b - &(&q() * &b.pow(2))
        );
        let pos = path().with_all_signs(Sign::Plus);
        assert_eq!(r_hat_prime_signed(&pos).unwrap(), b.pow(2) - &q() * &b);
    }

    #[test]
    fn b_examples() {
        let b = bq();
        let opr = LaurentPoly::one() + LaurentPoly::var("r");
        assert_eq!(b_poly(&Fatgraph::empty(1)).unwrap(), &opr * &b);
        assert_eq!(
            b_poly(&path()).unwrap(),
            &opr.pow(2) * &b.pow(2) - &(&q() * &opr) * &b
        );
        assert_eq!(
            b_poly(&loop1()).unwrap(),
            &opr * &b - &(&q() * &opr) * &b.pow(2)
        );
    }

    #[test]
    fn r_prime_specializes() {
        let inter = Fatgraph::new(vec![vec![0, 2, 1, 3]], vec![Sign::Minus; 2]).unwrap();
        let r = r_prime_signed(&inter).unwrap();
        // Only the full state has genus 1, so the r² part is its (q+q⁻¹)^{v+p} term alone.
        let r2 = LaurentPoly::from_terms(
            &["q", "s"],
            r.terms()
                .filter(|(e, _)| e[1] == 2)
                .map(|(e, c)| (vec![e[0], e[2]], c.clone())),
        );
        assert_eq!(r2, bq().pow(2));
        let z = z_poly(&inter).unwrap();
        let specialized = r
            .substitute("r", &q())
            .unwrap()
            .substitute("s", &q())
            .unwrap();
        assert_eq!(specialized, z);
    }
}
