//! Banded relations `sum_j a_{j,n} S_x P^[k]_{n-j} = sum_j b_{j,n} Q^[m]_{n-j}`:
//! search, the determinant condition, the induced functional identities
//! `psi u = D_x^{k-m}(phi D_x v + rho S_x v)` and the semiclassical certificate.

use super::{derived_sequence, Ops};
use crate::algebra::{linalg, Field, Poly};
use crate::error::{Error, Result};
use crate::functionals::MomentFunctional;
use crate::lattice::{LatticeKind, LatticeSpec};
use crate::operators::OperatorTable;

/// Coefficient tables of a banded relation for `n = 0..=n_hi`.
/// `a[n][j] = a_{j,n}` and `b[n][j] = b_{j,n}`; entries with `j > n`
/// multiply nothing and follow the convention corner `= 1`, others `= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationWitness<F: Field> {
    pub big_m: usize,
    pub big_n: usize,
    pub k: usize,
    pub m: usize,
    a: Vec<Vec<F>>,
    b: Vec<Vec<F>>,
}

impl<F: Field> RelationWitness<F> {
    /// Checks shapes and `a_{0,n} = 1 = b_{0,n}`.
    pub fn new(big_m: usize, big_n: usize, k: usize, m: usize, a: Vec<Vec<F>>, b: Vec<Vec<F>>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidWitness("a and b must cover the same nonempty range".into()));
        }
        for (n, (ra, rb)) in a.iter().zip(&b).enumerate() {
            if ra.len() != big_m + 1 || rb.len() != big_n + 1 {
                return Err(Error::InvalidWitness(format!("row {n} has the wrong band width")));
            }
            if !ra[0].is_one() || !rb[0].is_one() {
                return Err(Error::InvalidWitness(format!("a_(0,{n}) and b_(0,{n}) must equal 1")));
            }
        }
        Ok(RelationWitness { big_m, big_n, k, m, a, b })
    }

    /// Last `n` covered.
    pub fn n_hi(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self, j: usize, n: usize) -> Result<&F> {
        self.a.get(n).and_then(|r| r.get(j)).ok_or_else(|| self.out_of_range('a', j, n))
    }

    pub fn b(&self, j: usize, n: usize) -> Result<&F> {
        self.b.get(n).and_then(|r| r.get(j)).ok_or_else(|| self.out_of_range('b', j, n))
    }

    fn out_of_range(&self, which: char, j: usize, n: usize) -> Error {
        Error::InvalidWitness(format!("{which}_({j},{n}) lies outside the witness (n <= {})", self.n_hi()))
    }

    /// `a_{M,n} b_{N,n} != 0` for every covered `n`.
    pub fn check_corners(&self) -> Result<()> {
        for n in 0..=self.n_hi() {
            if self.a(self.big_m, n)?.is_zero() || self.b(self.big_n, n)?.is_zero() {
                return Err(Error::InvalidWitness(format!("vanishing corner at n = {n}")));
            }
        }
        Ok(())
    }
}

/// The matrix of order `M+N` with `l_{i,j} = a_{j-i,j}` for `i < N`,
/// `i <= j <= M+i`, and `l_{i,j} = b_{j-i+N,j}` for `i >= N`, `i-N <= j <= i`,
/// together with its determinant.
pub fn lemma1_matrix<F: Field>(w: &RelationWitness<F>) -> Result<(Vec<Vec<F>>, F)> {
    let (mm, nn) = (w.big_m, w.big_n);
    let size = mm + nn;
    if size > 0 && w.n_hi() + 1 < size {
        return Err(Error::InvalidWitness(format!("witness must cover n = 0..{}", size - 1)));
    }
    let mut mat = vec![vec![F::zero(); size]; size];
    for (i, row) in mat.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            if i < nn && i <= j && j <= mm + i {
                *slot = w.a(j - i, j)?.clone();
            } else if i >= nn && i - nn <= j && j <= i {
                *slot = w.b(j + nn - i, j)?.clone();
            }
        }
    }
    let det = linalg::determinant(&mat);
    Ok((mat, det))
}

/// `psi_{N+k+n}`, `phi_{M+m+n+1}` and `rho_{M+m+n}` for one `n`, with the
/// dual-basis coefficients `a'_{n,i}`, `b'_{n,j}` they were built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaPolys<F: Field> {
    pub n: usize,
    pub psi: Poly<F>,
    pub phi: Poly<F>,
    pub rho: Poly<F>,
    pub a_prime: Vec<F>,
    pub b_prime: Vec<F>,
}

/// Degrees `(psi, phi, rho)` the construction attains. `phi` loses one degree
/// on quadratic lattices (its top coefficient carries the factor
/// `alpha^2 - 1`) and vanishes when `M + m + n = 0`; `None` means zero.
pub fn expected_degrees<F: Field>(
    lat: &LatticeSpec<F>,
    w: &RelationWitness<F>,
    n: usize,
) -> (usize, Option<usize>, usize) {
    let base = w.big_m + w.m + n;
    let phi = match (base, lat.kind()) {
        (0, _) => None,
        (_, LatticeKind::Quadratic { .. }) => Some(base),
        (_, LatticeKind::QQuadratic { .. }) => Some(base + 1),
    };
    (w.big_n + w.k + n, phi, base)
}

/// Degrees `(N+k+n, M+m+n+1, M+m+n)` as stated for the construction.
pub fn stated_degrees<F: Field>(w: &RelationWitness<F>, n: usize) -> (usize, usize, usize) {
    (w.big_n + w.k + n, w.big_m + w.m + n + 1, w.big_m + w.m + n)
}

fn sign<F: Field>(k: usize) -> F {
    if k % 2 == 0 {
        F::one()
    } else {
        -F::one()
    }
}

/// Builds the three polynomials for index `n`. `p` and `q` carry the OPS of
/// `u` and `v`; the corner `b'_{n,n+M} = a_{M,M+N+n}` is imposed and
/// `a'_{n,n+N} = b_{N,M+N+n}` is verified; remaining freedom is set to zero.
pub fn lemma1_polys<F: Field>(
    n: usize,
    w: &RelationWitness<F>,
    p: &Ops<F>,
    q: &Ops<F>,
    table: &OperatorTable<F>,
) -> Result<LemmaPolys<F>> {
    let lat = table.lattice();
    let (mm, nn, k, m) = (w.big_m, w.big_n, w.k, w.m);
    if k < m {
        return Err(Error::Invalid("the construction needs k >= m".into()));
    }
    w.check_corners()?;
    if lemma1_matrix(w)?.1.is_zero() {
        return Err(Error::SingularA);
    }
    let top = n + nn + mm;
    if w.n_hi() < top {
        return Err(Error::InvalidWitness(format!("witness must reach n = {top}")));
    }
    let na = n + nn + 1;
    let nb = n + mm + 1;
    let cols = na + nb;
    let mut rows = Vec::with_capacity(top + 2);
    let mut rhs = Vec::with_capacity(top + 2);
    for l in 0..=top {
        let mut row = vec![F::zero(); cols];
        for (i, slot) in row.iter_mut().enumerate().take(na) {
            if i <= l && l <= i + mm {
                *slot = w.a(l - i, l)?.clone();
            }
        }
        for j in 0..nb {
            if j <= l && l <= j + nn {
                row[na + j] = -w.b(l - j, l)?.clone();
            }
        }
        rows.push(row);
        rhs.push(F::zero());
    }
    let mut pin = vec![F::zero(); cols];
    pin[cols - 1] = F::one();
    rows.push(pin);
    rhs.push(w.a(mm, top)?.clone());
    let x = linalg::solve(&rows, &rhs, cols)
        .ok_or_else(|| Error::NoSolution { n, residual: "dual-basis system is inconsistent".into() })?;
    let (a_prime, b_prime) = (x[..na].to_vec(), x[na..].to_vec());
    let corner = w.b(nn, top)?;
    if &a_prime[na - 1] != corner {
        let alt = w.b(nn, mm + 2 * nn).ok();
        let detail = if alt == Some(&a_prime[na - 1]) {
            format!("a'_(n,n+N) = {} matches b_(N,M+2N) only, not b_(N,M+N+n) = {corner}", a_prime[na - 1])
        } else {
            format!("a'_(n,n+N) = {}, expected b_(N,M+N+n) = {corner}", a_prime[na - 1])
        };
        return Err(Error::Mismatch { n, j: (n + nn) as i64, detail });
    }

    let mut psi = Poly::zero();
    for (i, ap) in a_prime.iter().enumerate() {
        if ap.is_zero() {
            continue;
        }
        let coef = sign::<F>(k) * lat.gamma_factorial(k + i) / (lat.gamma_factorial(i) * p.norm(k + i)?) * ap.clone();
        psi = &psi + &p.poly(k + i)?.scale(&coef);
    }

    let alpha = lat.alpha().clone();
    let (u1, u2) = lat.u_polys();
    let am1 = lat.alpha_n(m as i64 + 1);
    let gm = lat.gamma_n(m as i64);
    let phi_d = &u2.scale(&(alpha.clone() * am1.clone()))
        - &(&u1 * &u1).scale(&((am1.clone() + gm.clone()) / alpha.clone()));
    let phi_s = u1.scale(&gm);
    let rho_d = u1.scale(&((am1.clone() + gm) / alpha.clone()));
    let mut phi = Poly::zero();
    let mut rho = Poly::zero();
    for (j, bp) in b_prime.iter().enumerate() {
        if bp.is_zero() {
            continue;
        }
        let kj = sign::<F>(m) * lat.gamma_factorial(m + j)
            / (lat.gamma_factorial(j) * alpha.clone() * q.norm(m + j)?)
            * bp.clone();
        let qj = q.poly(m + j)?;
        let dq = table.dx(qj)?;
        let sq = table.sx(qj)?;
        phi = &phi + &(&(&phi_d * &dq) + &(&phi_s * &sq)).scale(&kj);
        rho = &rho + &(&sq.scale(&am1) + &(&rho_d * &dq)).scale(&kj);
    }

    let (e_psi, e_phi, e_rho) = expected_degrees(lat, w, n);
    let show = |p: &Poly<F>| p.degree().map_or("zero".to_string(), |d| d.to_string());
    if psi.degree() != Some(e_psi) {
        return Err(Error::DegreeCollapse { which: "psi".into(), expected: e_psi, found: show(&psi) });
    }
    if phi.degree() != e_phi {
        return Err(Error::DegreeCollapse { which: "phi".into(), expected: e_phi.unwrap_or(0), found: show(&phi) });
    }
    if rho.degree() != Some(e_rho) {
        return Err(Error::DegreeCollapse { which: "rho".into(), expected: e_rho, found: show(&rho) });
    }
    Ok(LemmaPolys { n, psi, phi, rho, a_prime, b_prime })
}

/// Moment residuals of `psi u - D_x^{k-m}(phi D_x v + rho S_x v)` on the
/// largest window both sides support, capped at `window` when given.
/// Returns the window used and the residual vector.
pub fn lemma1_relation_check<F: Field>(
    polys: &LemmaPolys<F>,
    u: &MomentFunctional<F>,
    v: &MomentFunctional<F>,
    k: usize,
    m: usize,
    table: &OperatorTable<F>,
    window: Option<usize>,
) -> Result<(usize, Vec<F>)> {
    if k < m {
        return Err(Error::Invalid("the relation needs k >= m".into()));
    }
    let lhs = u.poly_mul(&polys.psi)?;
    let dv = v.d_with(table)?.poly_mul(&polys.phi)?;
    let sv = v.s_with(table)?.poly_mul(&polys.rho)?;
    let rhs = dv.add(&sv).d_power(table, k - m)?;
    let avail = lhs.common_window(&rhs);
    let used = match window {
        Some(wd) if wd > avail => return Err(Error::WindowExhausted { needed: wd, window: avail }),
        Some(wd) => wd,
        None => avail,
    };
    let diff = lhs.truncate(used)?.sub(&rhs.truncate(used)?);
    Ok((used, diff.moments().to_vec()))
}

/// Output of [`thm32_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm32Certificate<F: Field> {
    pub phi2: Poly<F>,
    pub psi2: Poly<F>,
    pub pi: Poly<F>,
    pub rho: Poly<F>,
    pub b4_det: Poly<F>,
    /// Window and moments of `phi2 D_x v - psi2 S_x v`.
    pub pearson_v: (usize, Vec<F>),
    /// Window and moments of `pi u - rho S_x v`.
    pub link_uv: (usize, Vec<F>),
    /// Moments of `D_x psi_i S_x u - (row i of B4) . (D_x u, D_x^2 v, S_x D_x v, S_x^2 v)`.
    pub b4_system: Vec<Vec<F>>,
    /// The first nondegeneracy assumption that fails, if any.
    pub degenerate: Option<String>,
}

fn moments_of<F: Field>(f: &MomentFunctional<F>) -> Vec<F> {
    f.moments().to_vec()
}

fn nonzero_moments<F: Field>(xs: &[F]) -> bool {
    xs.iter().any(|x| !x.is_zero())
}

/// The semiclassical certificate for `k = m` from the polynomials at
/// `n = 0..=3`: hypotheses are checked first, then
/// `phi2 = phi_0 psi_1 - phi_1 psi_0`, `psi2 = rho_1 psi_0 - rho_0 psi_1`,
/// `pi = phi_1 psi_0 - phi_0 psi_1`, `rho = phi_1 rho_0 - phi_0 rho_1`.
/// A failed nondegeneracy assumption is an error.
pub fn thm32_certificate<F: Field>(
    list: &[LemmaPolys<F>],
    u: &MomentFunctional<F>,
    v: &MomentFunctional<F>,
    table: &OperatorTable<F>,
) -> Result<Thm32Certificate<F>> {
    let cert = thm32_residuals(list, u, v, table)?;
    match &cert.degenerate {
        Some(why) => Err(Error::HypothesisFailure(why.clone())),
        None => Ok(cert),
    }
}

/// As [`thm32_certificate`], but a failed nondegeneracy assumption is
/// recorded in `degenerate` and the residuals are still computed.
pub fn thm32_residuals<F: Field>(
    list: &[LemmaPolys<F>],
    u: &MomentFunctional<F>,
    v: &MomentFunctional<F>,
    table: &OperatorTable<F>,
) -> Result<Thm32Certificate<F>> {
    if list.len() < 4 {
        return Err(Error::Invalid("the certificate needs the polynomials for n = 0..3".into()));
    }
    let list = &list[..4];
    for lp in list {
        let (_, res) = lemma1_relation_check(lp, u, v, 0, 0, table, None)?;
        if nonzero_moments(&res) {
            return Err(Error::HypothesisFailure(format!("functional identity fails at n = {}", lp.n)));
        }
    }
    let mut degenerate = (0..3)
        .find(|&i| (&(&list[i].phi * &list[i + 1].rho) - &(&list[i + 1].phi * &list[i].rho)).is_zero())
        .map(|i| format!("phi_n rho_(n+1) - phi_(n+1) rho_n vanishes at n = {i}"));

    let lat = table.lattice();
    let alpha = lat.alpha().clone();
    let alpha_inv = alpha.recip();
    let (u1, _) = lat.u_polys();
    let two_a2 = F::int(2) * alpha.clone() * alpha.clone() - F::one();
    let mut b4 = Vec::with_capacity(4);
    for lp in list {
        let dpsi = table.dx(&lp.psi)?;
        let dphi = table.dx(&lp.phi)?;
        let drho = table.dx(&lp.rho)?;
        let kk = &table.sx(&lp.rho)? - &(&u1 * &drho).scale(&alpha_inv);
        b4.push(vec![
            &(&u1 * &dpsi) - &table.sx(&lp.psi)?.scale(&alpha),
            &table.sx(&lp.phi)?.scale(&alpha) - &(&u1 * &(&dphi - &kk)),
            &dphi + &kk.scale(&two_a2),
            drho,
        ]);
    }
    let b4_det = linalg::poly_determinant(&b4);
    if degenerate.is_none() && b4_det.is_zero() {
        degenerate = Some("det B4 vanishes identically".into());
    }

    let (p0, p1) = (&list[0], &list[1]);
    let phi2 = &(&p0.phi * &p1.psi) - &(&p1.phi * &p0.psi);
    let psi2 = &(&p1.rho * &p0.psi) - &(&p0.rho * &p1.psi);
    let pi = &(&p1.phi * &p0.psi) - &(&p0.phi * &p1.psi);
    let rho = &(&p1.phi * &p0.rho) - &(&p0.phi * &p1.rho);

    let dv = v.d_with(table)?;
    let sv = v.s_with(table)?;
    let pv = dv.poly_mul(&phi2)?.sub(&sv.poly_mul(&psi2)?);
    let link = u.poly_mul(&pi)?.sub(&sv.poly_mul(&rho)?);

    let du = u.d_with(table)?;
    let su = u.s_with(table)?;
    let ddv = dv.d_with(table)?;
    let sdv = dv.s_with(table)?;
    let ssv = sv.s_with(table)?;
    let basis = [&du, &ddv, &sdv, &ssv];
    let mut b4_system = Vec::with_capacity(4);
    for (lp, row) in list.iter().zip(&b4) {
        let mut acc = su.poly_mul(&table.dx(&lp.psi)?)?;
        for (c, f) in row.iter().zip(basis) {
            acc = acc.sub(&f.poly_mul(c)?);
        }
        b4_system.push(moments_of(&acc));
    }

    Ok(Thm32Certificate {
        phi2,
        psi2,
        pi,
        rho,
        b4_det,
        pearson_v: (pv.window(), moments_of(&pv)),
        link_uv: (link.window(), moments_of(&link)),
        b4_system,
        degenerate,
    })
}

/// Result of [`discover_banded`]: the witness (if any) and one transcript
/// line per candidate band.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandedSearch<F: Field> {
    pub witness: Option<RelationWitness<F>>,
    pub transcript: Vec<String>,
}

fn try_band<F: Field>(
    sp: &[Poly<F>],
    qm: &[Poly<F>],
    big_m: usize,
    big_n: usize,
    n_hi: usize,
) -> std::result::Result<(Vec<Vec<F>>, Vec<Vec<F>>), String> {
    let mut a_rows = Vec::with_capacity(n_hi + 1);
    let mut b_rows = Vec::with_capacity(n_hi + 1);
    for n in 0..=n_hi {
        let ma = big_m.min(n);
        let mb = big_n.min(n);
        let cols = ma + mb;
        let target = &qm[n] - &sp[n];
        let mut rows = Vec::with_capacity(n + 1);
        let mut rhs = Vec::with_capacity(n + 1);
        for d in 0..=n {
            let mut row = Vec::with_capacity(cols);
            row.extend((1..=ma).map(|j| sp[n - j].coeff(d)));
            row.extend((1..=mb).map(|j| -qm[n - j].coeff(d)));
            rows.push(row);
            rhs.push(target.coeff(d));
        }
        let corner_a = (big_m <= n && big_m > 0).then(|| big_m - 1);
        let corner_b = (big_n <= n && big_n > 0).then(|| ma + big_n - 1);
        let corners_ok = |x: &[F]| {
            corner_a.is_none_or(|c| !x[c].is_zero()) && corner_b.is_none_or(|c| !x[c].is_zero())
        };
        let first = linalg::solve_with(&rows, &rhs, cols, |c| {
            if Some(c) == corner_a || Some(c) == corner_b {
                F::one()
            } else {
                F::zero()
            }
        })
        .ok_or_else(|| format!("infeasible at n = {n}"))?;
        let x = if corners_ok(&first) {
            first
        } else {
            let second = linalg::solve_with(&rows, &rhs, cols, |_| F::one()).expect("system is consistent");
            if !corners_ok(&second) {
                return Err(format!("corner forced to zero at n = {n}"));
            }
            second
        };
        let mut a = vec![F::zero(); big_m + 1];
        let mut b = vec![F::zero(); big_n + 1];
        a[0] = F::one();
        b[0] = F::one();
        a[1..=ma].clone_from_slice(&x[..ma]);
        b[1..=mb].clone_from_slice(&x[ma..]);
        if big_m > n {
            a[big_m] = F::one();
        }
        if big_n > n {
            b[big_n] = F::one();
        }
        a_rows.push(a);
        b_rows.push(b);
    }
    Ok((a_rows, b_rows))
}

/// Smallest band `(M, N)`, ordered by `M + N` then `M`, for which
/// `sum_{j<=M} a_{j,n} S_x P^[k]_{n-j} = sum_{j<=N} b_{j,n} Q^[m]_{n-j}` is
/// solvable with `a_{0,n} = b_{0,n} = 1` and nonzero corners for every
/// `n <= n_hi`. Inputs `p`, `q` are the OPS themselves.
#[allow(clippy::too_many_arguments)]
pub fn discover_banded<F: Field>(
    p: &[Poly<F>],
    q: &[Poly<F>],
    k: usize,
    m: usize,
    m_max: usize,
    n_max: usize,
    n_hi: usize,
    table: &OperatorTable<F>,
) -> Result<BandedSearch<F>> {
    if k < m {
        return Err(Error::Invalid("the search needs k >= m".into()));
    }
    let pk = derived_sequence(p, k, table)?;
    let qm = derived_sequence(q, m, table)?;
    if pk.len() <= n_hi || qm.len() <= n_hi {
        return Err(Error::InsufficientDepth { needed: n_hi, available: pk.len().min(qm.len()).saturating_sub(1) });
    }
    let sp = pk[..=n_hi].iter().map(|x| table.sx(x)).collect::<Result<Vec<_>>>()?;
    let mut transcript = Vec::new();
    for total in 0..=m_max + n_max {
        for big_m in 0..=total.min(m_max) {
            let big_n = total - big_m;
            if big_n > n_max {
                continue;
            }
            match try_band(&sp, &qm, big_m, big_n, n_hi) {
                Ok((a, b)) => {
                    transcript.push(format!("(M,N) = ({big_m},{big_n}): found for n <= {n_hi}"));
                    let witness = RelationWitness::new(big_m, big_n, k, m, a, b)?;
                    return Ok(BandedSearch { witness: Some(witness), transcript });
                }
                Err(why) => transcript.push(format!("(M,N) = ({big_m},{big_n}): {why}")),
            }
        }
    }
    Ok(BandedSearch { witness: None, transcript })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::corollary_branch1;
    use crate::recurrence::generate_ops;
    use num_rational::BigRational as Q;

    fn q(n: i64, d: i64) -> Q {
        Q::frac(n, d)
    }

    fn constant_witness(big_m: usize, big_n: usize, a1: Q, b1: Q, len: usize) -> RelationWitness<Q> {
        let a = (0..len)
            .map(|_| {
                let mut r = vec![q(0, 1); big_m + 1];
                r[0] = q(1, 1);
                if big_m > 0 {
                    r[big_m] = a1.clone();
                }
                r
            })
            .collect();
        let b = (0..len)
            .map(|_| {
                let mut r = vec![q(0, 1); big_n + 1];
                r[0] = q(1, 1);
                if big_n > 0 {
                    r[big_n] = b1.clone();
                }
                r
            })
            .collect();
        RelationWitness::new(big_m, big_n, 0, 0, a, b).unwrap()
    }

    #[test]
    fn two_by_two_matrix_follows_the_index_rule() {
        let w = constant_witness(1, 1, q(2, 3), q(5, 7), 3);
        let (mat, det) = lemma1_matrix(&w).unwrap();
        assert_eq!(mat, vec![vec![q(1, 1), q(2, 3)], vec![q(1, 1), q(5, 7)]]);
        assert_eq!(det, q(5, 7) - q(2, 3));
        let zero = constant_witness(1, 1, q(0, 1), q(0, 1), 3);
        assert_eq!(lemma1_matrix(&zero).unwrap().1, q(0, 1));
        let one_sided = constant_witness(0, 2, q(0, 1), q(0, 1), 3);
        assert_eq!(lemma1_matrix(&one_sided).unwrap().1, q(1, 1));
    }

    #[test]
    fn witness_normalization_is_enforced() {
        let bad = RelationWitness::new(1, 0, 0, 0, vec![vec![q(2, 1), q(1, 1)]], vec![vec![q(1, 1)]]);
        assert!(matches!(bad, Err(Error::InvalidWitness(_))));
        let zero = constant_witness(1, 1, q(0, 1), q(1, 1), 3);
        assert!(matches!(zero.check_corners(), Err(Error::InvalidWitness(_))));
    }

    struct Golden {
        table: OperatorTable<Q>,
        p: Vec<Poly<Q>>,
    }

    fn golden() -> Golden {
        let lat = LatticeSpec::quadratic(q(1, 4), q(0, 1), q(0, 1)).unwrap();
        let inst = corollary_branch1(&q(1, 4), &q(0, 1), &q(1, 1), &q(1, 2), 16).unwrap();
        Golden { table: OperatorTable::new(&lat, 30).unwrap(), p: generate_ops(&inst.recurrence, 18).unwrap() }
    }

    #[test]
    fn s_expansion_in_own_basis() {
        let g = golden();
        let sp1 = g.table.sx(&g.p[1]).unwrap();
        assert_eq!(sp1, &g.p[1] + &Poly::constant(q(1, 4)));
        let sp2 = g.table.sx(&g.p[2]).unwrap();
        let expect = &(&g.p[2] + &g.p[1].scale(&q(3, 2))) + &Poly::constant(q(1, 16));
        assert_eq!(sp2, expect);
    }

    #[test]
    fn derived_basis_gives_a_one_band_witness() {
        let g = golden();
        let d1 = derived_sequence(&g.p, 1, &g.table).unwrap();
        let found = discover_banded(&g.p, &d1, 0, 0, 4, 4, 12, &g.table).unwrap();
        let w = found.witness.expect("witness");
        assert_eq!((w.big_m, w.big_n), (0, 1));
        assert_eq!(lemma1_matrix(&w).unwrap().1, q(1, 1));
        assert_eq!(found.transcript.len(), 2);
        w.check_corners().unwrap();
        // S_x P_1 = P^[1]_1 + b_(1,1) P^[1]_0 with S_x P_1 = z + 3/2 and P^[1]_1 = z + 4.
        assert_eq!(w.b(1, 1).unwrap(), &q(-5, 2));
    }

    #[test]
    fn own_basis_has_no_band() {
        let g = golden();
        for k in 0..2 {
            let found = discover_banded(&g.p, &g.p, k, k, 4, 4, 12, &g.table).unwrap();
            assert!(found.witness.is_none());
            assert_eq!(found.transcript.len(), 25);
            assert_eq!(found.transcript[4], "(M,N) = (1,1): infeasible at n = 3");
        }
    }

    #[test]
    fn unrelated_families_are_not_found() {
        let g = golden();
        let other = corollary_branch1(&q(1, 4), &q(0, 1), &q(3, 1), &q(-1, 3), 16).unwrap();
        let po = generate_ops(&other.recurrence, 18).unwrap();
        let found = discover_banded(&g.p, &po, 0, 0, 1, 1, 12, &g.table).unwrap();
        assert!(found.witness.is_none());
        assert_eq!(found.transcript.len(), 4);
    }

    fn pipeline(k: usize, window: usize) -> (Vec<LemmaPolys<Q>>, Ops<Q>, Ops<Q>, OperatorTable<Q>, RelationWitness<Q>) {
        let g = golden();
        let inst = corollary_branch1(&q(1, 4), &q(0, 1), &q(1, 1), &q(1, 2), 16).unwrap();
        let pops = Ops::from_recurrence(&inst.recurrence, window).unwrap();
        let d1 = derived_sequence(pops.polys(), 1, &g.table).unwrap();
        let qops = Ops::from_polys(d1, window).unwrap();
        let w = discover_banded(pops.polys(), qops.polys(), k, k, 4, 4, 12, &g.table).unwrap().witness.unwrap();
        let list = (0..4).map(|n| lemma1_polys(n, &w, &pops, &qops, &g.table).unwrap()).collect();
        (list, pops, qops, g.table, w)
    }

    #[test]
    fn construction_satisfies_the_functional_identity() {
        let (list, pops, qops, table, w) = pipeline(0, 24);
        for lp in &list {
            let (psi_deg, phi_deg, rho_deg) = expected_degrees(table.lattice(), &w, lp.n);
            assert_eq!(lp.psi.degree(), Some(psi_deg));
            assert_eq!(lp.phi.degree(), phi_deg);
            assert_eq!(lp.rho.degree(), Some(rho_deg));
            let (used, res) =
                lemma1_relation_check(lp, pops.functional(), qops.functional(), 0, 0, &table, None).unwrap();
            assert!(used >= 14);
            assert!(res.iter().all(|x| x == &q(0, 1)));
        }
        let mut broken = list[0].clone();
        broken.psi = &broken.psi + &Poly::one();
        let (_, res) = lemma1_relation_check(&broken, pops.functional(), qops.functional(), 0, 0, &table, None).unwrap();
        assert_eq!(res[0], q(1, 1));
        assert!(matches!(
            lemma1_relation_check(&list[0], pops.functional(), qops.functional(), 0, 0, &table, Some(500)),
            Err(Error::WindowExhausted { .. })
        ));
    }

    #[test]
    fn certificate_residuals_vanish() {
        let (list, pops, qops, table, _) = pipeline(0, 24);
        let cert = thm32_residuals(&list, pops.functional(), qops.functional(), &table).unwrap();
        assert!(cert.pearson_v.1.iter().all(|x| x == &q(0, 1)));
        assert!(cert.link_uv.1.iter().all(|x| x == &q(0, 1)));
        assert!(cert.b4_system.iter().flatten().all(|x| x == &q(0, 1)));
        assert!(cert.pearson_v.0 >= 20);
        assert_eq!(cert.pi, -cert.phi2.clone());
        assert!(cert.b4_det.is_zero());
        assert_eq!(cert.degenerate.as_deref(), Some("det B4 vanishes identically"));
        let err = thm32_certificate(&list, pops.functional(), qops.functional(), &table).unwrap_err();
        assert!(matches!(err, Error::HypothesisFailure(_)));

        let mut swapped = list.clone();
        let psi0 = swapped[0].psi.clone();
        swapped[0].psi = swapped[1].psi.clone();
        swapped[1].psi = psi0;
        let err = thm32_residuals(&swapped, pops.functional(), qops.functional(), &table).unwrap_err();
        assert!(matches!(err, Error::HypothesisFailure(_)));
    }

    #[test]
    fn first_derivative_pipeline() {
        let (list, pops, qops, table, w) = pipeline(1, 24);
        assert_eq!((w.big_m, w.big_n, w.k), (0, 1, 1));
        for lp in &list {
            let (psi_deg, phi_deg, rho_deg) = expected_degrees(table.lattice(), &w, lp.n);
            assert_eq!((lp.psi.degree(), lp.phi.degree(), lp.rho.degree()), (Some(psi_deg), phi_deg, Some(rho_deg)));
            assert_ne!(phi_deg, Some(stated_degrees(&w, lp.n).1));
            let (_, res) = lemma1_relation_check(lp, pops.functional(), qops.functional(), 1, 1, &table, None).unwrap();
            assert!(res.iter().all(|x| x == &q(0, 1)));
        }
        let cert = thm32_residuals(&list, pops.functional(), qops.functional(), &table).unwrap();
        assert!(cert.pearson_v.1.iter().chain(&cert.link_uv.1).all(|x| x == &q(0, 1)));
    }
}
