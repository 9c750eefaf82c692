//! The (phi, Gamma)-module D(W) of W = ind(omega_n^h) (x) chi in the basis
//! f_j = X^(h_j) e_j, its lattice D# = sum E[[X]] f_j, psi-tower stubs with
//! the B-action, and the linear form theta.

use rand::Rng;

use crate::arith::{digit_profile, is_primitive, lucas_binom, DigitProfile, Field, FieldElem, PadicInt, Qp, DEFAULT_PREC_P};
use crate::borel::{BorelGen, BorelMat, SmoothChar};
use crate::error::{Error, Result};
use crate::series::{f_gamma, gamma_unit, one_plus_x_pow, GammaElement, LaurentSeries, DEFAULT_SERIES_PREC};

/// chi = omega^m mu_lambda
pub type TameChar = SmoothChar;

/// Component j is the coefficient of f_j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DElement {
    pub comps: Vec<LaurentSeries>,
}

impl DElement {
    pub fn zero(field: &Field, n: u32, prec: i64) -> DElement {
        DElement { comps: (0..n).map(|_| LaurentSeries::zero(field, prec)).collect() }
    }

    /// alpha f_j
    pub fn single(field: &Field, n: u32, j: usize, alpha: LaurentSeries) -> DElement {
        let prec = alpha.prec();
        let mut d = DElement::zero(field, n, prec);
        d.comps[j] = alpha;
        d
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// In D#: every component has valuation >= 0.
    pub fn is_integral(&self) -> bool {
        self.comps.iter().all(|c| c.val() >= 0)
    }

    pub fn prec(&self) -> i64 {
        self.comps.iter().map(|c| c.prec()).min().unwrap_or(i64::MAX)
    }

    pub fn add(&self, o: &DElement) -> DElement {
        DElement { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &DElement) -> DElement {
        DElement { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: FieldElem) -> DElement {
        DElement { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    /// alpha * self
    pub fn mul_series(&self, alpha: &LaurentSeries) -> DElement {
        DElement { comps: self.comps.iter().map(|a| a.mul(alpha)).collect() }
    }

    pub fn agrees_with(&self, o: &DElement, upto: i64) -> bool {
        self.comps.iter().zip(&o.comps).all(|(a, b)| a.agrees_with(b, upto))
    }

    pub fn eq_mod_prec(&self, o: &DElement) -> bool {
        self.comps.iter().zip(&o.comps).all(|(a, b)| a.eq_mod_prec(b))
    }

    pub fn truncate(&self, prec: i64) -> DElement {
        DElement { comps: self.comps.iter().map(|a| a.truncate(prec)).collect() }
    }

    /// theta_0: the constant term of the f_0 component.
    pub fn theta0(&self) -> Result<FieldElem> {
        self.comps[0].constant_term()
    }
}

/// The tower (y_0, ..., y_M) with y_i = psi^(M-i)(top).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TowerStub {
    pub depth: u32,
    pub top: DElement,
}

#[derive(Clone, Debug)]
pub struct PGModule {
    field: Field,
    n: u32,
    h: u64,
    chi: TameChar,
    profile: DigitProfile,
    exponents: Vec<PadicInt>,
}

impl PGModule {
    pub fn new(field: &Field, n: u32, h: u64, chi: TameChar) -> Result<PGModule> {
        let p = field.p();
        let profile = digit_profile(h, n, p)?;
        if !is_primitive(h, n, p)? {
            return Err(Error::Domain(format!("h={h} is not primitive for n={n}, p={p}")));
        }
        // s_j = h p^j (p-1) / (p^n - 1); p^n - 1 is a unit
        let q1 = PadicInt::from_u64((p as u64).pow(n) - 1, p, DEFAULT_PREC_P).inv()?;
        let exponents = (0..n)
            .map(|j| PadicInt::from_u64(h * (p as u64 - 1), p, DEFAULT_PREC_P).shift_up(j as usize).mul(&q1))
            .collect();
        Ok(PGModule { field: field.clone(), n, h, chi, profile, exponents })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn chi(&self) -> &TameChar {
        &self.chi
    }

    pub fn profile(&self) -> &DigitProfile {
        &self.profile
    }

    pub fn exponents(&self) -> &[PadicInt] {
        &self.exponents
    }

    fn lambda(&self) -> FieldElem {
        self.chi.lambda()
    }

    fn lambda_inv(&self) -> FieldElem {
        self.field.inv(self.lambda()).expect("lambda != 0")
    }

    /// (-1)^(n-1)
    fn sign(&self) -> FieldElem {
        self.field.from_int(if self.n % 2 == 1 { 1 } else { -1 })
    }

    fn digit(&self, k: usize) -> i64 {
        self.profile.i[k] as i64
    }

    /// f_j known mod X^prec
    pub fn basis(&self, j: usize, prec: i64) -> DElement {
        DElement::single(&self.field, self.n, j, LaurentSeries::one(&self.field, prec))
    }

    fn check(&self, d: &DElement) -> Result<()> {
        if d.n() != self.n as usize {
            return Err(Error::Shape(format!("{} components for n={}", d.n(), self.n)));
        }
        Ok(())
    }

    pub fn psi_d(&self, d: &DElement) -> Result<DElement> {
        self.check(d)?;
        let n = self.n as usize;
        let mut out = d.comps.clone();
        for (j, alpha) in d.comps.iter().enumerate() {
            let (target, i, c) = if j >= 1 {
                (j - 1, self.digit(n - j), self.lambda_inv())
            } else {
                (n - 1, self.digit(0), self.field.mul(self.lambda_inv(), self.sign()))
            };
            out[target] = alpha.shift(i).psi().scale(c);
        }
        Ok(DElement { comps: out })
    }

    pub fn psi_d_pow(&self, d: &DElement, k: u32) -> Result<DElement> {
        (0..k).try_fold(d.clone(), |y, _| self.psi_d(&y))
    }

    pub fn phi_d(&self, d: &DElement) -> Result<DElement> {
        self.check(d)?;
        let n = self.n as usize;
        let mut out = d.comps.clone();
        for (j, alpha) in d.comps.iter().enumerate() {
            let i = self.digit(n - j - 1);
            let (target, c) = if j + 1 < n {
                (j + 1, self.lambda())
            } else {
                (0, self.field.mul(self.lambda(), self.sign()))
            };
            out[target] = alpha.phi().shift(-i).scale(c);
        }
        Ok(DElement { comps: out })
    }

    /// gamma(alpha f_j) = gamma(alpha) (gamma(X)/X)^(h_j) omega^m(a) f_gamma^(s_j) f_j
    pub fn gamma_d(&self, g: &GammaElement, d: &DElement) -> Result<DElement> {
        self.check(d)?;
        let f = &self.field;
        let w = self.chi.on_residue(g.omega());
        let mut out = Vec::with_capacity(d.n());
        for (j, alpha) in d.comps.iter().enumerate() {
            if alpha.is_zero() {
                out.push(alpha.clone());
                continue;
            }
            let rel = alpha.prec() - alpha.val();
            let ga = alpha.gamma_act(g)?;
            let u = gamma_unit(f, g, rel)?.powi(self.profile.hk[j] as i64)?;
            let fg = f_gamma(f, g, rel)?.unit_pow(&self.exponents[j])?;
            out.push(ga.mul(&u).mul(&fg).scale(w));
        }
        Ok(DElement { comps: out })
    }

    /// Some y in D# with psi_d(y) = d.
    pub fn psi_preimage(&self, d: &DElement) -> Result<DElement> {
        self.check(d)?;
        if !d.is_integral() {
            return Err(Error::Domain("psi_preimage needs an element of D#".into()));
        }
        let n = self.n as usize;
        let f = &self.field;
        let sgn = |i: i64| f.from_int(if i % 2 == 0 { 1 } else { -1 });
        let mut out = d.comps.clone();
        for (t, dt) in d.comps.iter().enumerate() {
            // psi(phi(d) X^i) = (-1)^i d for 0 <= i <= p-1
            let (source, c) = if t + 1 < n {
                let i = self.digit(n - t - 1);
                (t + 1, f.mul(sgn(i), self.lambda()))
            } else {
                let i = self.digit(0);
                (0, f.mul(f.mul(sgn(i), self.lambda()), self.sign()))
            };
            out[source] = dt.phi().scale(c);
        }
        Ok(DElement { comps: out })
    }

    /// (omega^(h-1) chi^2)(x), the central character of Omega(W).
    pub fn central_char(&self, x: &Qp) -> Result<FieldElem> {
        let f = &self.field;
        let w = SmoothChar::omega_pow(f, self.h as i64 - 1);
        Ok(f.mul(w.eval(x)?, f.pow(self.chi.eval(x)?, 2)?))
    }

    /// sum_{j < p^n} binom(j, h(p-1)) (1+X)^j as a polynomial.
    pub fn binom_sum(&self) -> LaurentSeries {
        let f = &self.field;
        let p = self.p();
        let len = (p as u64).pow(self.n);
        let hn = self.profile.hn();
        let mut coeffs = vec![FieldElem::ZERO; len as usize];
        for j in 0..len {
            let c = lucas_binom(j, hn, p);
            if c == 0 {
                continue;
            }
            let c = f.from_int(c as i64);
            for (k, slot) in coeffs.iter_mut().enumerate().take(j as usize + 1) {
                let b = lucas_binom(j, k as u64, p);
                if b != 0 {
                    *slot = f.add(*slot, f.mul(c, f.from_int(b as i64)));
                }
            }
        }
        LaurentSeries::new(f, 0, coeffs, i64::MAX / 4)
    }

    pub fn random_series<R: Rng>(&self, rng: &mut R, prec: i64) -> LaurentSeries {
        let q = self.field.size();
        let coeffs = (0..prec).map(|_| self.field.from_code(rng.gen_range(0..q)).unwrap()).collect();
        LaurentSeries::new(&self.field, 0, coeffs, prec)
    }

    pub fn random_delement<R: Rng>(&self, rng: &mut R, prec: i64) -> DElement {
        DElement { comps: (0..self.n).map(|_| self.random_series(rng, prec)).collect() }
    }

    /// A random stub whose every layer is known mod X^layer_prec.
    pub fn random_stub<R: Rng>(&self, rng: &mut R, depth: u32, layer_prec: i64) -> TowerStub {
        let top_prec = layer_prec * (self.p() as i64).pow(depth);
        TowerStub { depth, top: self.random_delement(rng, top_prec) }
    }

    /// A stub of the given depth whose layer 0 is y0, built by psi_preimage.
    pub fn lift(&self, y0: &DElement, depth: u32) -> Result<TowerStub> {
        let mut top = y0.clone();
        for _ in 0..depth {
            top = self.psi_preimage(&top)?;
        }
        Ok(TowerStub { depth, top })
    }

    pub fn layer(&self, y: &TowerStub, i: u32) -> Result<DElement> {
        if i > y.depth {
            return Err(Error::Depth(format!("layer {i} of a depth-{} stub", y.depth)));
        }
        self.psi_d_pow(&y.top, y.depth - i)
    }

    /// The same tower truncated to fewer layers.
    pub fn reroot(&self, y: &TowerStub, depth: u32) -> Result<TowerStub> {
        Ok(TowerStub { depth, top: self.layer(y, depth)? })
    }

    pub fn theta_eval(&self, y: &TowerStub) -> Result<FieldElem> {
        self.layer(y, 0)?.theta0()
    }

    pub fn act_central(&self, x: &Qp, y: &TowerStub) -> Result<TowerStub> {
        let c = self.field.inv(self.central_char(x)?)?;
        Ok(TowerStub { depth: y.depth, top: y.top.scale(c) })
    }

    /// diag(1, p^j): y_i -> y_{i-j}
    pub fn act_p_power(&self, j: i64, y: &TowerStub) -> Result<TowerStub> {
        if j >= 0 {
            Ok(TowerStub { depth: y.depth, top: self.psi_d_pow(&y.top, j as u32)? })
        } else if (-j) as u32 <= y.depth {
            Ok(TowerStub { depth: y.depth - (-j) as u32, top: y.top.clone() })
        } else {
            Err(Error::Depth(format!("diag(1, p^{j}) on a depth-{} stub", y.depth)))
        }
    }

    /// diag(1, a) for a unit a: gamma_{1/a} on every layer.
    pub fn act_diag_unit(&self, a: &PadicInt, y: &TowerStub) -> Result<TowerStub> {
        let g = GammaElement::new(a.inv()?)?;
        Ok(TowerStub { depth: y.depth, top: self.gamma_d(&g, &y.top)? })
    }

    /// (1, z; 0, 1): y_i -> (1+X)^(p^i z) y_i, needs depth >= -val(z).
    pub fn act_unipotent(&self, z: &Qp, y: &TowerStub) -> Result<TowerStub> {
        if z.is_zero() {
            return Ok(y.clone());
        }
        if z.val() + (y.depth as i64) < 0 {
            return Err(Error::Depth(format!("u(z) with val(z)={} on a depth-{} stub", z.val(), y.depth)));
        }
        let s = z.shift(y.depth as i64).to_padic()?;
        let prec = y.top.comps.iter().map(|c| c.prec()).max().unwrap_or(0);
        let factor = one_plus_x_pow(&self.field, &s, prec)?;
        Ok(TowerStub { depth: y.depth, top: y.top.mul_series(&factor) })
    }

    pub fn borel_act(&self, g: &BorelGen, y: &TowerStub) -> Result<TowerStub> {
        match g {
            BorelGen::Central(x) => self.act_central(x, y),
            BorelGen::PPower(j) => self.act_p_power(*j, y),
            BorelGen::Unipotent(z) => self.act_unipotent(z, y),
            BorelGen::DiagUnits(a, d) => {
                // diag(a, d) = central(a) diag(1, d/a)
                let t = self.act_diag_unit(&d.mul(&a.inv()?), y)?;
                self.act_central(&Qp::from_padic(a, 0), &t)
            }
        }
    }

    /// (a, b; 0, d) = central(a) u(b/d) diag(1, p^k) diag(1, u) with d/a = p^k u.
    pub fn act_matrix(&self, m: &BorelMat, y: &TowerStub) -> Result<TowerStub> {
        let r = m.d.mul(&m.a.inv()?);
        let mut t = y.clone();
        let unit = r.unit();
        if unit.digit(0) != 1 || unit.digits().iter().skip(1).any(|&x| x != 0) {
            t = self.act_diag_unit(unit, &t)?;
        }
        t = self.act_p_power(r.val(), &t)?;
        t = self.act_unipotent(&m.b.mul(&m.d.inv()?), &t)?;
        if m.a != Qp::one(self.p()) {
            t = self.act_central(&m.a, &t)?;
        }
        Ok(t)
    }

    /// (k theta)(y) = theta(k^-1 y)
    pub fn translate_theta(&self, k: &BorelMat, y: &TowerStub) -> Result<FieldElem> {
        self.theta_eval(&self.act_matrix(&k.inv(), y)?)
    }

    /// The value predicted for k theta by the character identity on KZ.
    pub fn kz_eigenvalue(&self, k: &BorelMat) -> Result<FieldElem> {
        let f = &self.field;
        let w = SmoothChar::omega_pow(f, self.h as i64 - 1);
        Ok(f.mul(w.eval(&k.a)?, self.chi.eval(&k.det())?))
    }

    /// k theta = omega^(h-1)(a) chi(ad) theta on random stubs.
    pub fn acbormu_check<R: Rng>(&self, k: &BorelMat, trials: usize, rng: &mut R) -> Result<bool> {
        if !k.in_kz() {
            return Err(Error::Domain(format!("{k:?} is not in KZ")));
        }
        let f = &self.field;
        let c = self.kz_eigenvalue(k)?;
        for _ in 0..trials {
            let y = self.random_stub(rng, 1, DEFAULT_SERIES_PREC);
            if self.translate_theta(k, &y)? != f.mul(c, self.theta_eval(&y)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// (-1)^(n-1) lambda^n theta(y0) - lambda^(2n) theta0(psi^n(B(X) y0)),
    /// B the binomial sum.
    pub fn nultheta_value(&self, y: &TowerStub) -> Result<FieldElem> {
        let f = &self.field;
        let y0 = self.layer(y, 0)?;
        let lam = self.lambda();
        let lhs = f.mul(f.mul(self.sign(), f.pow(lam, self.n as i64)?), y0.theta0()?);
        let moved = self.psi_d_pow(&y0.mul_series(&self.binom_sum()), self.n)?;
        let rhs = f.mul(f.pow(lam, 2 * self.n as i64)?, moved.theta0()?);
        Ok(f.sub(lhs, rhs))
    }

    /// The same value computed through the B-action of the matrices
    /// (p^n, -j; 0, 1) on the stub.
    pub fn nultheta_value_by_action(&self, y: &TowerStub) -> Result<FieldElem> {
        let f = &self.field;
        let p = self.p();
        let lam = self.lambda();
        let hn = self.profile.hn();
        let mut acc = f.mul(f.mul(self.sign(), f.pow(lam, self.n as i64)?), self.theta_eval(y)?);
        let pn = (p as i64).pow(self.n);
        for j in 0..pn {
            let c = lucas_binom(j as u64, hn, p);
            if c == 0 {
                continue;
            }
            let g = BorelMat::from_ints(pn, -j, 1, p)?;
            let v = self.translate_theta(&g, y)?;
            acc = f.sub(acc, f.mul(f.from_int(c as i64), v));
        }
        Ok(acc)
    }

    /// theta is killed by the nultheta operator on random stubs of depth n,
    /// evaluated both through the closed formula and through the action.
    pub fn nultheta_check<R: Rng>(&self, trials: usize, rng: &mut R) -> Result<bool> {
        for _ in 0..trials {
            let y = self.random_stub(rng, self.n, DEFAULT_SERIES_PREC);
            let a = self.nultheta_value(&y)?;
            let b = self.nultheta_value_by_action(&y)?;
            if !a.is_zero() || !b.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// psi^n(B(X) alpha f_0) = (-1)^(n-1) lambda^(-n) alpha f_0 mod X D#, and
    /// B(X) has the predicted leading term.
    pub fn key_congruence_check<R: Rng>(&self, trials: usize, rng: &mut R) -> Result<bool> {
        let f = &self.field;
        let b = self.binom_sum();
        let pn = (self.p() as i64).pow(self.n);
        if b.val() != pn - self.profile.hn() as i64 - 1 || b.coeffs()[0] != f.one() {
            return Ok(false);
        }
        let c = f.mul(self.sign(), f.pow(self.lambda_inv(), self.n as i64)?);
        for _ in 0..trials {
            let alpha = self.random_series(rng, DEFAULT_SERIES_PREC);
            let d = DElement::single(f, self.n, 0, alpha.clone()).mul_series(&b);
            let e = self.psi_d_pow(&d, self.n)?;
            for (j, comp) in e.comps.iter().enumerate() {
                let want = if j == 0 { f.mul(c, alpha.constant_term()?) } else { FieldElem::ZERO };
                if comp.constant_term()? != want || comp.val() < 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// phi and gamma_a in the e-basis, one line per basis vector.
    pub fn matrices_text(&self, g: &GammaElement, prec: i64) -> Result<String> {
        let f = &self.field;
        let n = self.n as usize;
        let lam = f.format(self.lambda());
        let mut out = String::new();
        for j in 0..n {
            if j + 1 < n {
                out.push_str(&format!("phi(e_{j}) = {lam} * e_{}\n", j + 1));
            } else {
                let c = f.format(f.mul(self.sign(), self.lambda()));
                out.push_str(&format!("phi(e_{j}) = {c} * X^-{} * e_0\n", self.profile.hn()));
            }
        }
        let w = self.chi.on_residue(g.omega());
        for j in 0..n {
            let s = f_gamma(f, g, prec)?.unit_pow(&self.exponents[j])?.scale(w);
            out.push_str(&format!("gamma_{:?}(e_{j}) = {} * e_{j}\n", g.a().to_i64().unwrap_or(0), s.dump()));
        }
        Ok(out)
    }
}
