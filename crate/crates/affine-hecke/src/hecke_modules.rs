//! Finite-dimensional modules with the parameters specialized to exact
//! rationals.
//!
//! A module stores one invertible matrix per algebra generator: T_s for the
//! finite simple reflections it carries, the affine generator T_{s0} and the
//! length-zero elements T_γ when the module is over the whole algebra, and
//! θ_{±e_k} on a lattice basis when it is over an affine subalgebra
//! 𝓗_I = H_I ⊗ 𝓗_∅.  Every constructor verifies the defining relations —
//! quadratic, braid, θ-commutativity, the commutation rule between θ_x and
//! T_s, and conjugation by the length-zero subgroup — as exact matrix
//! identities.
//!
//! Induction follows the tensor description 𝓗 ⊗_{𝓗_I} N.  Because
//! 𝓗 = H ⊗ 𝓗_∅ as a vector space, the induced space has basis
//! {T_x ⊗ n} over minimal coset representatives x, and the action of a
//! generator h is computed by normalizing h·T_x into the form Σ c·T_w θ_μ,
//! splitting each w = x'·u with x' minimal and u ∈ W_I (lengths add), and
//! passing T_u θ_μ through the tensor as σ(T_u)σ(θ_μ).
//!
//! The duality operator D[M] = Σ_{I ⊆ S} (−1)^{|I|} [Ind_I Res_I M] lives in
//! the Grothendieck group, which in characteristic zero is separated by
//! traces; equality of virtual modules is therefore witnessed by comparing
//! traces on basis elements, completely for finite Hecke algebras and up to a
//! stated length bound for affine ones.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::affine_weyl::AffineWeylElement;
use crate::coefficients::{LaurentPoly, ParamSpec};
use crate::error::{Error, Result};
use crate::hecke::{BlElem, HeckeAlgebra, HeckeElem};
use crate::linalg::QMat;
use crate::weyl::{subsets_of, WeylGroup};

/// Which algebra the stored matrices represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraPart {
    /// The span of {T_v : v ∈ W_I} alone — no lattice part.
    Finite,
    /// 𝓗_I = H_I ⊗ 𝓗_∅: the T_s for s ∈ I together with every θ_x.
    Affine,
}

/// A module given by exact rational matrices for the generators it carries.
#[derive(Clone)]
pub struct HeckeModule {
    alg: Arc<HeckeAlgebra>,
    spec: ParamSpec,
    part: AlgebraPart,
    i_set: Vec<usize>,
    dim: usize,
    gen_mats: BTreeMap<usize, QMat>,
    s0_mat: Option<QMat>,
    omega_mats: Vec<(AffineWeylElement, QMat)>,
    theta_mats: Vec<QMat>,
    theta_inv_mats: Vec<QMat>,
}

impl std::fmt::Debug for HeckeModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HeckeModule")
            .field("part", &self.part)
            .field("i_set", &self.i_set)
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

/// A formal integer combination of modules (a Grothendieck-group element
/// presented with explicit summands).
#[derive(Clone)]
pub struct VirtualModule {
    pub summands: Vec<(i64, HeckeModule)>,
}

/// Outcome of a trace comparison between two virtual modules.
#[derive(Debug, Clone)]
pub struct GrothendieckReport {
    pub equal: bool,
    pub bound: usize,
    /// Whether the witness family spans the algebra (always true for finite
    /// Hecke algebras once the bound reaches ℓ(w_0); never claimed for
    /// affine ones).
    pub complete: bool,
    pub elements_checked: usize,
    pub first_discrepancy: Option<(AffineWeylElement, BigRational, BigRational)>,
}

impl HeckeModule {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn part(&self) -> AlgebraPart {
        self.part
    }

    /// The finite simple reflections whose action is stored.
    pub fn generator_set(&self) -> &[usize] {
        &self.i_set
    }

    pub fn algebra(&self) -> &Arc<HeckeAlgebra> {
        &self.alg
    }

    pub fn spec(&self) -> &ParamSpec {
        &self.spec
    }

    /// Matrix of T at node s (s = rank addresses the affine generator).
    pub fn gen_mat(&self, s: usize) -> Option<&QMat> {
        if s == self.alg.aw.rank() {
            self.s0_mat.as_ref()
        } else {
            self.gen_mats.get(&s)
        }
    }

    pub fn theta_basis_mat(&self, k: usize) -> &QMat {
        &self.theta_mats[k]
    }

    /// Matrices of the length-zero elements T_γ (full affine modules only).
    pub fn omega_mats(&self) -> &[(AffineWeylElement, QMat)] {
        &self.omega_mats
    }

    fn is_full(&self) -> bool {
        self.i_set.len() == self.alg.aw.rank()
    }

    fn sp(&self, c: &LaurentPoly) -> BigRational {
        c.specialize(&self.spec)
    }

    fn q_rat(&self, node: usize) -> BigRational {
        self.alg.params.q_of_gen(node).specialize(&self.spec)
    }

    /// One-dimensional module over the lattice part 𝓗_∅: θ_x acts by the
    /// character t(x) = Π t_k^{x_k}.
    pub fn theta_character(
        alg: &Arc<HeckeAlgebra>,
        spec: &ParamSpec,
        t: &[BigRational],
    ) -> Result<Self> {
        let n = alg.aw.rank();
        if t.len() != n {
            return Err(Error::IllegalParameter(format!(
                "character needs {} values, got {}",
                n,
                t.len()
            )));
        }
        if t.iter().any(|v| v.is_zero()) {
            return Err(Error::IllegalCharacter);
        }
        let theta_mats: Vec<QMat> =
            t.iter().map(|v| QMat::from_fn(1, 1, |_, _| v.clone())).collect();
        let theta_inv_mats: Vec<QMat> =
            t.iter().map(|v| QMat::from_fn(1, 1, |_, _| v.recip())).collect();
        Ok(HeckeModule {
            alg: alg.clone(),
            spec: spec.clone(),
            part: AlgebraPart::Affine,
            i_set: Vec::new(),
            dim: 1,
            gen_mats: BTreeMap::new(),
            s0_mat: None,
            omega_mats: Vec::new(),
            theta_mats,
            theta_inv_mats,
        })
    }

    /// One-dimensional module of the finite subalgebra on `i_set`: each T_s
    /// acts by a scalar, which the quadratic relation forces into {q_s, −1}.
    pub fn finite_one_dim(
        alg: &Arc<HeckeAlgebra>,
        spec: &ParamSpec,
        i_set: &[usize],
        values: &BTreeMap<usize, BigRational>,
    ) -> Result<Self> {
        let mut gen_mats = BTreeMap::new();
        for &s in i_set {
            let v = values
                .get(&s)
                .ok_or_else(|| Error::NotAModule(format!("no value for generator {s}")))?;
            gen_mats.insert(s, QMat::from_fn(1, 1, |_, _| v.clone()));
        }
        let m = HeckeModule {
            alg: alg.clone(),
            spec: spec.clone(),
            part: AlgebraPart::Finite,
            i_set: i_set.to_vec(),
            dim: 1,
            gen_mats,
            s0_mat: None,
            omega_mats: Vec::new(),
            theta_mats: Vec::new(),
            theta_inv_mats: Vec::new(),
        };
        m.verify_relations()?;
        Ok(m)
    }

    /// T_s ↦ q_s on every generator of `i_set` (index representation).
    pub fn finite_trivial(
        alg: &Arc<HeckeAlgebra>,
        spec: &ParamSpec,
        i_set: &[usize],
    ) -> Result<Self> {
        let values: BTreeMap<usize, BigRational> = i_set
            .iter()
            .map(|&s| (s, alg.params.q_of_gen(s).specialize(spec)))
            .collect();
        Self::finite_one_dim(alg, spec, i_set, &values)
    }

    /// T_s ↦ −1 on every generator of `i_set`.
    pub fn finite_sign(
        alg: &Arc<HeckeAlgebra>,
        spec: &ParamSpec,
        i_set: &[usize],
    ) -> Result<Self> {
        let minus_one = -BigRational::one();
        let values: BTreeMap<usize, BigRational> =
            i_set.iter().map(|&s| (s, minus_one.clone())).collect();
        Self::finite_one_dim(alg, spec, i_set, &values)
    }

    /// Product of generator matrices along a reduced word of the finite
    /// element `u`; every letter must carry a stored action.
    fn finite_word_mat(&self, u: usize) -> Result<QMat> {
        let wg = &self.alg.aw.w;
        let mut m = QMat::identity(self.dim);
        for &s in wg.word(u) {
            let g = self
                .gen_mats
                .get(&s)
                .ok_or_else(|| Error::NotAModule(format!("element leaves the subalgebra: needs T at node {s}")))?;
            m = m.mul(g);
        }
        Ok(m)
    }

    /// Matrix of θ_x (affine modules only).
    pub fn theta_action(&self, x: &[i64]) -> Result<QMat> {
        if self.part == AlgebraPart::Finite {
            return Err(Error::NotAModule("finite-algebra module has no lattice action".into()));
        }
        let mut m = QMat::identity(self.dim);
        for (k, &e) in x.iter().enumerate() {
            let base = if e >= 0 { &self.theta_mats[k] } else { &self.theta_inv_mats[k] };
            for _ in 0..e.unsigned_abs() {
                m = m.mul(base);
            }
        }
        Ok(m)
    }

    /// π of an element written on the basis {T_v θ_x}.
    pub fn act_bl(&self, b: &BlElem) -> Result<QMat> {
        let mut out = QMat::zeros(self.dim, self.dim);
        for ((v, x), c) in &b.terms {
            let m = self.finite_word_mat(*v)?.mul(&self.theta_action(x)?);
            out = out.add(&m.scale(&self.sp(c)));
        }
        Ok(out)
    }

    /// π of an element written on the basis {T_w}.
    pub fn act_im(&self, h: &HeckeElem) -> Result<QMat> {
        match self.part {
            AlgebraPart::Finite => {
                let mut out = QMat::zeros(self.dim, self.dim);
                for (w, c) in &h.terms {
                    if w.trans.iter().any(|&t| t != 0) {
                        return Err(Error::NotAModule(
                            "finite-algebra module cannot act on a translation".into(),
                        ));
                    }
                    out = out.add(&self.finite_word_mat(w.fin)?.scale(&self.sp(c)));
                }
                Ok(out)
            }
            AlgebraPart::Affine => self.act_bl(&self.alg.bl_from_im(h)?),
        }
    }

    pub fn act_basis(&self, w: &AffineWeylElement) -> Result<QMat> {
        self.act_im(&self.alg.t_basis(w))
    }

    pub fn trace(&self, w: &AffineWeylElement) -> Result<BigRational> {
        Ok(self.act_basis(w)?.trace())
    }

    /// Check every defining relation among the stored generator matrices as
    /// an exact identity.
    pub fn verify_relations(&self) -> Result<()> {
        let aw = &self.alg.aw;
        let d = aw.datum();
        let n = self.dim;
        let id = QMat::identity(n);
        let one = BigRational::one();

        let mut nodes: Vec<(usize, &QMat)> = self.gen_mats.iter().map(|(&s, m)| (s, m)).collect();
        if let Some(m0) = &self.s0_mat {
            nodes.push((d.rank, m0));
        }

        // Quadratic: T² = q + (q − 1)T (which also forces invertibility).
        for (s, m) in &nodes {
            let q = self.q_rat(*s);
            let rhs = id.scale(&q).add(&m.scale(&(q.clone() - &one)));
            if m.mul(m) != rhs {
                return Err(Error::NotAModule(format!("quadratic relation fails at node {s}")));
            }
        }

        // Braid: alternating products of order m(s, t) agree.
        for (a, (s, ms)) in nodes.iter().enumerate() {
            for (t, mt) in nodes.iter().skip(a + 1) {
                let m_order = d.m_affine(*s, *t);
                if m_order == crate::root_datum::M_INFINITY {
                    continue; // no relation between this pair
                }
                let mut lhs = id.clone();
                let mut rhs = id.clone();
                for k in 0..m_order {
                    if k % 2 == 0 {
                        lhs = lhs.mul(ms);
                        rhs = rhs.mul(mt);
                    } else {
                        lhs = lhs.mul(mt);
                        rhs = rhs.mul(ms);
                    }
                }
                if lhs != rhs {
                    return Err(Error::NotAModule(format!(
                        "braid relation of order {m_order} fails between nodes {s} and {t}"
                    )));
                }
            }
        }

        if self.part == AlgebraPart::Affine {
            // The lattice part is a commutative group of units.
            for k in 0..self.theta_mats.len() {
                if self.theta_mats[k].mul(&self.theta_inv_mats[k]) != id {
                    return Err(Error::NotAModule(format!("θ at basis vector {k} is not invertible")));
                }
                for l in (k + 1)..self.theta_mats.len() {
                    if self.theta_mats[k].mul(&self.theta_mats[l])
                        != self.theta_mats[l].mul(&self.theta_mats[k])
                    {
                        return Err(Error::NotAModule(format!("θ's at basis vectors {k}, {l} do not commute")));
                    }
                }
            }

            // Commutation between θ_x and T_s, on ±each lattice basis vector:
            // θ_x T_s − T_s θ_{s(x)} equals the correction term Γ(s, x).
            let rank = aw.rank();
            for &s in &self.i_set {
                let ts = &self.gen_mats[&s];
                for k in 0..rank {
                    for sign in [1i64, -1] {
                        let mut x = vec![0i64; rank];
                        x[k] = sign;
                        let sx = d.reflect_by_index(d.simple_root_index(s), &x);
                        let lhs = self.theta_action(&x)?.mul(ts).sub(&ts.mul(&self.theta_action(&sx)?));
                        let mut rhs = QMat::zeros(n, n);
                        for (y, c) in self.alg.gamma_terms(s, &x)? {
                            rhs = rhs.add(&self.theta_action(&y)?.scale(&self.sp(&c)));
                        }
                        if lhs != rhs {
                            return Err(Error::NotAModule(format!(
                                "lattice commutation fails at node {s}, basis vector {k}, sign {sign}"
                            )));
                        }
                    }
                }
            }

            // Length-zero subgroup: multiplication table and conjugation
            // permuting the affine generators.
            if !self.omega_mats.is_empty() {
                let find = |g: &AffineWeylElement| -> &QMat {
                    &self
                        .omega_mats
                        .iter()
                        .find(|(h, _)| h == g)
                        .expect("length-zero subgroup is closed")
                        .1
                };
                for (g1, m1) in &self.omega_mats {
                    for (g2, m2) in &self.omega_mats {
                        let prod = aw.mul(g1, g2);
                        if m1.mul(m2) != *find(&prod) {
                            return Err(Error::NotAModule(
                                "length-zero multiplication table fails".into(),
                            ));
                        }
                    }
                }
                for (g, mg) in &self.omega_mats {
                    let g_inv = aw.inv(g);
                    for j in 0..aw.n_gens() {
                        let conj = aw.mul(&aw.mul(g, &aw.gen(j)), &g_inv);
                        let j2 = (0..aw.n_gens())
                            .find(|&j2| aw.gen(j2) == conj)
                            .expect("conjugation permutes the affine generators");
                        let mj = self.gen_mat(j).ok_or_else(|| {
                            Error::NotAModule("length-zero conjugation needs all generators".into())
                        })?;
                        let mj2 = self.gen_mat(j2).unwrap();
                        if mg.mul(mj) != mj2.mul(mg) {
                            return Err(Error::NotAModule(format!(
                                "length-zero conjugation fails: node {j} ↦ node {j2}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Restriction to the subalgebra on `i_sub` ⊆ the stored generator set:
    /// forget the other T_s (and the length-zero part unless nothing is
    /// forgotten); keep every θ.
    pub fn res(&self, i_sub: &[usize]) -> HeckeModule {
        let mut i_sub: Vec<usize> = i_sub.to_vec();
        i_sub.sort_unstable();
        i_sub.dedup();
        assert!(
            i_sub.iter().all(|s| self.i_set.contains(s)),
            "restriction target must be contained in the stored generator set"
        );
        if i_sub == self.i_set {
            return self.clone();
        }
        HeckeModule {
            alg: self.alg.clone(),
            spec: self.spec.clone(),
            part: self.part,
            dim: self.dim,
            gen_mats: i_sub.iter().map(|&s| (s, self.gen_mats[&s].clone())).collect(),
            i_set: i_sub,
            s0_mat: None,
            omega_mats: Vec::new(),
            theta_mats: self.theta_mats.clone(),
            theta_inv_mats: self.theta_inv_mats.clone(),
        }
    }

    /// Minimal-length representatives of the cosets xW_I inside W_J.
    fn relative_reps(wg: &WeylGroup, i_set: &[usize], j_set: &[usize]) -> Vec<usize> {
        let sub = wg.parabolic(j_set);
        sub.ids
            .iter()
            .copied()
            .filter(|&x| {
                i_set.iter().all(|&s| wg.length(wg.mul(x, wg.simple(s))) > wg.length(x))
            })
            .collect()
    }

    /// Split w = x·u with x minimal in xW_I and u ∈ W_I (lengths add).
    fn split_minimal(wg: &WeylGroup, i_set: &[usize], w: usize) -> (usize, usize) {
        let mut x = w;
        let mut u = wg.identity();
        'strip: loop {
            for &s in i_set {
                let simple = wg.simple(s);
                let xs = wg.mul(x, simple);
                if wg.length(xs) < wg.length(x) {
                    x = xs;
                    u = wg.mul(simple, u);
                    continue 'strip;
                }
            }
            return (x, u);
        }
    }

    /// Induction 𝓗_J ⊗_{𝓗_I} N to the subalgebra on `j_set` ⊇ the generator
    /// set of `self` (the whole algebra when `j_set` is all of S, which also
    /// restores the affine generator and the length-zero part).
    pub fn ind_to(&self, j_set: &[usize]) -> Result<HeckeModule> {
        self.verify_relations()?;
        let alg = self.alg.clone();
        let aw = &alg.aw;
        let wg = &aw.w;
        let rank = aw.rank();
        let mut j_set: Vec<usize> = j_set.to_vec();
        j_set.sort_unstable();
        j_set.dedup();
        assert!(
            self.i_set.iter().all(|s| j_set.contains(s)),
            "induction target must contain the stored generator set"
        );
        let full = j_set.len() == rank;

        let reps = Self::relative_reps(wg, &self.i_set, &j_set);
        let rep_pos: BTreeMap<usize, usize> =
            reps.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let nd = self.dim;
        let dim = reps.len() * nd;

        // Scatter the normal form of h·T_x into the column block of x: each
        // term c·T_w θ_μ contributes sp(c)·σ(T_u)σ(θ_μ) to the block row of
        // the minimal representative x' in w = x'·u.
        let scatter = |out: &mut QMat, col_block: usize, w: usize, mu: Option<&[i64]>, c: &LaurentPoly| -> Result<()> {
            let (x_min, u) = Self::split_minimal(wg, &self.i_set, w);
            let row_block = *rep_pos
                .get(&x_min)
                .expect("normal-form support stays inside the target parabolic");
            let mut block = self.finite_word_mat(u)?;
            if let Some(mu) = mu {
                block = block.mul(&self.theta_action(mu)?);
            }
            let coeff = self.sp(c);
            for i in 0..nd {
                for j in 0..nd {
                    let v = &block[(i, j)] * &coeff;
                    if !v.is_zero() {
                        let cell = &mut out[(row_block * nd + i, col_block * nd + j)];
                        *cell = &*cell + v;
                    }
                }
            }
            Ok(())
        };

        // The matrix of a generator h on the induced basis, from either the
        // finite product h·T_x (no lattice part) or its normal form on
        // {T_v θ_x}.
        let build_finite = |h: &HeckeElem| -> Result<QMat> {
            let mut out = QMat::zeros(dim, dim);
            for (col, &x) in reps.iter().enumerate() {
                let prod = alg.mul(h, &alg.t_finite(x))?;
                for (w, c) in &prod.terms {
                    debug_assert!(w.trans.iter().all(|&t| t == 0));
                    scatter(&mut out, col, w.fin, None, c)?;
                }
            }
            Ok(out)
        };
        let build_bl = |b: &BlElem| -> Result<QMat> {
            let mut out = QMat::zeros(dim, dim);
            for (col, &x) in reps.iter().enumerate() {
                let mut prod = b.clone();
                for &s in wg.word(x) {
                    prod = alg.bl_mul_finite_gen(&prod, s)?;
                }
                for ((w, mu), c) in &prod.terms {
                    scatter(&mut out, col, *w, Some(mu), c)?;
                }
            }
            Ok(out)
        };

        let mut gen_mats = BTreeMap::new();
        let mut s0_mat = None;
        let mut omega_mats = Vec::new();
        let mut theta_mats = Vec::new();
        let mut theta_inv_mats = Vec::new();

        match self.part {
            AlgebraPart::Finite => {
                for &s in &j_set {
                    gen_mats.insert(s, build_finite(&alg.t_finite(wg.simple(s)))?);
                }
            }
            AlgebraPart::Affine => {
                for &s in &j_set {
                    gen_mats.insert(s, build_bl(&alg.bl_from_im(&alg.t_finite(wg.simple(s)))?)?);
                }
                if full {
                    s0_mat = Some(build_bl(&alg.bl_from_im(&alg.t_basis(&aw.gen(rank)))?)?);
                    for gamma in aw.omega_elements() {
                        let m = build_bl(&alg.bl_from_im(&alg.t_basis(&gamma))?)?;
                        omega_mats.push((gamma, m));
                    }
                }
                for k in 0..rank {
                    let mut x = vec![0i64; rank];
                    x[k] = 1;
                    theta_mats.push(build_bl(&alg.theta_bl(&x))?);
                    x[k] = -1;
                    theta_inv_mats.push(build_bl(&alg.theta_bl(&x))?);
                }
            }
        }

        let out = HeckeModule {
            alg,
            spec: self.spec.clone(),
            part: self.part,
            i_set: j_set,
            dim,
            gen_mats,
            s0_mat,
            omega_mats,
            theta_mats,
            theta_inv_mats,
        };
        out.verify_relations()?;
        Ok(out)
    }

    /// Induction all the way up to the whole algebra.
    pub fn ind_full(&self) -> Result<HeckeModule> {
        let rank = self.alg.aw.rank();
        self.ind_to(&(0..rank).collect::<Vec<_>>())
    }

    /// Twist the action by the star involution:
    /// T at node s ↦ (q_s − 1)·Id − T, length-zero T_γ picks up the sign of
    /// its finite part, and θ is twisted through the algebra-level star.
    pub fn twist_star(&self) -> Result<HeckeModule> {
        let one = BigRational::one();
        let id = QMat::identity(self.dim);
        let twist_node = |s: usize, m: &QMat| -> QMat {
            let q = self.q_rat(s);
            id.scale(&(q - &one)).sub(m)
        };
        let gen_mats: BTreeMap<usize, QMat> =
            self.gen_mats.iter().map(|(&s, m)| (s, twist_node(s, m))).collect();
        let s0_mat = self.s0_mat.as_ref().map(|m| twist_node(self.alg.aw.rank(), m));
        let omega_mats: Vec<(AffineWeylElement, QMat)> = self
            .omega_mats
            .iter()
            .map(|(g, m)| {
                let sign = self.alg.aw.w.sign(g.fin);
                (g.clone(), if sign < 0 { m.neg() } else { m.clone() })
            })
            .collect();
        let mut theta_mats = Vec::new();
        let mut theta_inv_mats = Vec::new();
        if self.part == AlgebraPart::Affine {
            if !self.is_full() {
                return Err(Error::AssumptionViolated(
                    "star does not preserve a proper subalgebra; twist needs the full module".into(),
                ));
            }
            let rank = self.alg.aw.rank();
            for k in 0..rank {
                let mut x = vec![0i64; rank];
                x[k] = 1;
                let twisted = self.act_im(&self.alg.star(&self.alg.theta(&x)))?;
                let inv = twisted
                    .inverse()
                    .ok_or_else(|| Error::NotAModule("twisted θ must stay invertible".into()))?;
                theta_mats.push(twisted);
                theta_inv_mats.push(inv);
            }
        }
        let out = HeckeModule {
            alg: self.alg.clone(),
            spec: self.spec.clone(),
            part: self.part,
            i_set: self.i_set.clone(),
            dim: self.dim,
            gen_mats,
            s0_mat,
            omega_mats,
            theta_mats,
            theta_inv_mats,
        };
        out.verify_relations()?;
        Ok(out)
    }

    /// Traces of T_w over the length-`bound` ball (extended by the
    /// length-zero subgroup in the affine case), built incrementally:
    /// π(T_w) = π(T_{ws})·π(T_s) down a reduced word.
    pub fn ball_traces(&self, bound: usize) -> Result<BTreeMap<AffineWeylElement, BigRational>> {
        let aw = &self.alg.aw;
        let wg = &aw.w;
        let mut out = BTreeMap::new();
        match self.part {
            AlgebraPart::Finite => {
                let mut mats: Vec<Option<QMat>> = vec![None; wg.n];
                for v in 0..wg.n {
                    if wg.length(v) > bound {
                        continue;
                    }
                    let m = if v == wg.identity() {
                        QMat::identity(self.dim)
                    } else {
                        let word = wg.word(v);
                        let s = *word.last().unwrap();
                        let shorter = wg.mul(v, wg.simple(s));
                        mats[shorter]
                            .as_ref()
                            .expect("ids are sorted by length")
                            .mul(self.gen_mats.get(&s).ok_or_else(|| {
                                Error::NotAModule("trace family needs every finite generator".into())
                            })?)
                    };
                    out.insert(aw.from_finite(v), m.trace());
                    mats[v] = Some(m);
                }
            }
            AlgebraPart::Affine => {
                let mut ball = aw.ball(bound);
                ball.sort_by_key(|w| aw.aw_length(w));
                let mut mats: BTreeMap<AffineWeylElement, QMat> = BTreeMap::new();
                for w in &ball {
                    let lw = aw.aw_length(w);
                    let m = if lw == 0 {
                        QMat::identity(self.dim)
                    } else {
                        let (s, shorter) = (0..aw.n_gens())
                            .map(|s| (s, aw.mul(w, &aw.gen(s))))
                            .find(|(_, ws)| aw.aw_length(ws) < lw)
                            .expect("positive length has a right descent");
                        let gm = self.gen_mat(s).ok_or_else(|| {
                            Error::NotAModule("trace family needs the full set of generators".into())
                        })?;
                        mats[&shorter].mul(gm)
                    };
                    mats.insert(w.clone(), m);
                }
                for (gamma, mg) in &self.omega_mats {
                    for (w, m) in &mats {
                        // tr(AB) without forming AB.
                        let mut t = BigRational::zero();
                        for i in 0..self.dim {
                            for k in 0..self.dim {
                                if !mg[(i, k)].is_zero() && !m[(k, i)].is_zero() {
                                    t += &mg[(i, k)] * &m[(k, i)];
                                }
                            }
                        }
                        out.insert(aw.mul(gamma, w), t);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl VirtualModule {
    pub fn of(m: HeckeModule) -> Self {
        VirtualModule { summands: vec![(1, m)] }
    }

    pub fn negated(&self) -> Self {
        VirtualModule {
            summands: self.summands.iter().map(|(s, m)| (-s, m.clone())).collect(),
        }
    }

    /// Σ signs · tr π_i(T_w).
    pub fn trace(&self, w: &AffineWeylElement) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (sign, m) in &self.summands {
            acc += m.trace(w)? * BigRational::from_integer((*sign).into());
        }
        Ok(acc)
    }

    /// Signed dimension, the trace at the identity.
    pub fn virtual_dim(&self) -> i64 {
        self.summands.iter().map(|(s, m)| s * m.dim() as i64).sum()
    }

    /// Signed traces over the length-`bound` basis ball, sorted by
    /// (length, element).  For finite-part summands the bound is clamped to
    /// ℓ(w_0), past which the family is already the whole basis.
    pub fn trace_table(&self, bound: usize) -> Result<Vec<(AffineWeylElement, BigRational)>> {
        if self.summands.is_empty() {
            return Ok(Vec::new());
        }
        let mut acc: BTreeMap<AffineWeylElement, BigRational> = BTreeMap::new();
        for (sign, m) in &self.summands {
            let s = BigRational::from_integer((*sign).into());
            let b = match m.part() {
                AlgebraPart::Finite => {
                    let wg = &m.algebra().aw.w;
                    let all: Vec<usize> = (0..m.algebra().aw.rank()).collect();
                    bound.min(wg.length(wg.longest_element(&all)))
                }
                AlgebraPart::Affine => bound,
            };
            for (w, tr) in m.ball_traces(b)? {
                let cell = acc.entry(w).or_insert_with(BigRational::zero);
                *cell = &*cell + tr * &s;
            }
        }
        let aw = &self.summands[0].1.algebra().aw;
        let mut out: Vec<(AffineWeylElement, BigRational)> = acc.into_iter().collect();
        out.sort_by_key(|(w, _)| (aw.aw_length(w), w.clone()));
        Ok(out)
    }
}

/// D[M] = Σ_{I ⊆ S} (−1)^{|I|} [Ind_I Res_I M] over subsets of the finite
/// simple reflections.
pub fn d_operator(m: &HeckeModule) -> Result<VirtualModule> {
    let rank = m.algebra().aw.rank();
    assert!(m.is_full(), "the duality operator acts on modules over the whole algebra");
    let mut summands = Vec::new();
    for i_set in subsets_of(rank) {
        let sign = if i_set.len() % 2 == 0 { 1 } else { -1 };
        summands.push((sign, m.res(&i_set).ind_full()?));
    }
    Ok(VirtualModule { summands })
}

/// Apply the duality operator to every summand of a virtual module.
pub fn d_operator_virtual(v: &VirtualModule) -> Result<VirtualModule> {
    let mut summands = Vec::new();
    for (sign, m) in &v.summands {
        for (s2, m2) in d_operator(m)?.summands {
            summands.push((sign * s2, m2));
        }
    }
    Ok(VirtualModule { summands })
}

/// Compare two virtual modules by traces on the basis family of length up to
/// `bound` (all of {T_w} for finite algebras once the bound reaches ℓ(w_0)).
pub fn grothendieck_equal(
    v1: &VirtualModule,
    v2: &VirtualModule,
    bound: usize,
) -> Result<GrothendieckReport> {
    let probe = v1
        .summands
        .first()
        .or_else(|| v2.summands.first())
        .expect("comparison needs at least one summand");
    let part = probe.1.part();
    let alg = probe.1.algebra().clone();
    for (_, m) in v1.summands.iter().chain(&v2.summands) {
        if !Arc::ptr_eq(m.algebra(), &alg) || m.spec() != probe.1.spec() || m.part() != part {
            return Err(Error::ParameterMismatch);
        }
    }

    let aw = &alg.aw;
    let (bound, complete) = match part {
        AlgebraPart::Finite => {
            let lw0 = aw.w.length(aw.w.longest_element(&(0..aw.rank()).collect::<Vec<_>>()));
            (bound.min(lw0), bound >= lw0)
        }
        AlgebraPart::Affine => (bound, false),
    };

    let mut t1: BTreeMap<AffineWeylElement, BigRational> = BTreeMap::new();
    let mut t2 = t1.clone();
    for (target, v) in [(&mut t1, v1), (&mut t2, v2)] {
        for (sign, m) in &v.summands {
            let s = BigRational::from_integer((*sign).into());
            for (w, tr) in m.ball_traces(bound)? {
                let cell = target.entry(w).or_insert_with(BigRational::zero);
                *cell = &*cell + tr * &s;
            }
        }
    }

    let mut family: Vec<AffineWeylElement> = t1.keys().cloned().collect();
    family.sort_by_key(|w| (aw.aw_length(w), w.clone()));
    let elements_checked = family.len();
    let zero = BigRational::zero();
    let mut first_discrepancy = None;
    for w in family {
        let a = t1.get(&w).unwrap_or(&zero);
        let b = t2.get(&w).unwrap_or(&zero);
        if a != b {
            first_discrepancy = Some((w, a.clone(), b.clone()));
            break;
        }
    }
    Ok(GrothendieckReport {
        equal: first_discrepancy.is_none(),
        bound,
        complete,
        elements_checked,
        first_discrepancy,
    })
}

/// Dimension of ∩_{s ∈ S} Im τ_s inside 𝓗 ⊗_{𝓗_∅} M ≅ H ⊗ M, where
/// τ_s(h ⊗ m) = hT_s ⊗ π(T_s)^{−1}m − h ⊗ m.  The kernel of the duality
/// complex is spanned by alternating-sign tuples, so this must come out to
/// dim M.
pub fn kernel_intersection_dim(m: &HeckeModule) -> Result<usize> {
    assert!(
        m.part() == AlgebraPart::Affine && m.is_full(),
        "the kernel witness lives over the whole affine algebra"
    );
    let alg = m.algebra();
    let wg = &alg.aw.w;
    let order = wg.n;
    let one = BigRational::one();

    let mut intersection: Option<QMat> = None;
    for s in 0..alg.aw.rank() {
        let q = m.q_rat(s);
        // Right multiplication by T at node s on the finite basis {T_v}.
        let mut r = QMat::zeros(order, order);
        for v in 0..order {
            let vs = wg.mul(v, wg.simple(s));
            if wg.length(vs) > wg.length(v) {
                r[(vs, v)] = one.clone();
            } else {
                r[(vs, v)] = q.clone();
                let cell = &mut r[(v, v)];
                *cell = &*cell + (&q - &one);
            }
        }
        let p_inv = m.gen_mats[&s]
            .inverse()
            .expect("quadratic relation makes the generator invertible");
        let tau = r.kron(&p_inv).sub(&QMat::identity(order * m.dim()));
        let image = tau.image_basis();
        intersection = Some(match intersection {
            None => image,
            Some(b) => {
                // x ∈ Im(b) ∩ Im(image): solve b·a = image·c.
                let stacked = b.hcat(&image.neg());
                let ker = stacked.kernel_basis();
                let a_part = QMat::from_fn(b.cols, ker.cols, |i, j| ker[(i, j)].clone());
                b.mul(&a_part).image_basis()
            }
        });
    }
    Ok(intersection.map_or(0, |b| b.cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{int, rat};
    use crate::root_datum::{build_root_datum, Family, LatticeKind, ParamAssignment};

    fn algebra(
        family: Family,
        rank: usize,
        lattice: LatticeKind,
    ) -> (Arc<HeckeAlgebra>, ParamSpec) {
        let datum = build_root_datum(family, rank, lattice).unwrap();
        let assignment = ParamAssignment::equal_parameters(&datum);
        let alg = Arc::new(HeckeAlgebra::new(&datum, &assignment).unwrap());
        let spec = alg.params.default_spec(&int(4)).unwrap();
        (alg, spec)
    }

    fn generic_t(alg: &HeckeAlgebra) -> Vec<BigRational> {
        // Small distinct primes keep the character away from accidental
        // resonances on the tested types.
        [rat(2, 1), rat(5, 1), rat(11, 1), rat(17, 1)][..alg.aw.rank()].to_vec()
    }

    fn principal_series(
        alg: &Arc<HeckeAlgebra>,
        spec: &ParamSpec,
        t: &[BigRational],
    ) -> Result<HeckeModule> {
        HeckeModule::theta_character(alg, spec, t)?.ind_full()
    }

    #[test]
    fn principal_series_dimension_and_relations() {
        // Rank one on the root lattice: dimension |W| = 2.
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root);
        let ps = principal_series(&alg, &spec, &generic_t(&alg)).unwrap();
        assert_eq!(ps.dim(), 2);
        assert_eq!(ps.trace(&alg.aw.identity()).unwrap(), int(2));

        // A2 on the weight lattice: dimension 6, quadratic as a 6×6 identity.
        let (alg, spec) = algebra(Family::A, 2, LatticeKind::Weight);
        let ps = principal_series(&alg, &spec, &generic_t(&alg)).unwrap();
        assert_eq!(ps.dim(), 6);
        assert_eq!(ps.trace(&alg.aw.identity()).unwrap(), int(6));
        let t0 = ps.gen_mat(0).unwrap();
        let q = int(4);
        let expect = QMat::identity(6).scale(&q).add(&t0.scale(&(q.clone() - int(1))));
        assert_eq!(t0.mul(t0), expect);
        ps.verify_relations().unwrap();
    }

    #[test]
    fn principal_series_theta_is_triangular_with_character_eigenvalues() {
        let (alg, spec) = algebra(Family::A, 2, LatticeKind::Weight);
        let t = generic_t(&alg);
        let ps = principal_series(&alg, &spec, &t).unwrap();
        let wg = &alg.aw.w;
        let t_of = |x: &[i64]| -> BigRational {
            let mut acc = BigRational::one();
            for (k, &e) in x.iter().enumerate() {
                for _ in 0..e.unsigned_abs() {
                    if e > 0 {
                        acc *= &t[k];
                    } else {
                        acc /= &t[k];
                    }
                }
            }
            acc
        };
        for x in [vec![1, 0], vec![0, 1], vec![1, -2]] {
            let m = ps.theta_action(&x).unwrap();
            // Basis vectors are the minimal representatives of W/{e} = W in
            // the id order, which sorts by length: the action is triangular
            // with diagonal t(v^{-1}·x).
            for i in 0..6 {
                for j in 0..i {
                    assert!(m[(i, j)].is_zero(), "entries below the diagonal vanish");
                }
                let diag = t_of(&wg.act_on_x(wg.inv(i), &x));
                assert_eq!(m[(i, i)], diag);
            }
        }
    }

    #[test]
    fn zero_character_value_is_rejected() {
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root);
        let err = HeckeModule::theta_character(&alg, &spec, &[int(0)]).unwrap_err();
        assert_eq!(err, Error::IllegalCharacter);
    }

    #[test]
    fn restriction_forgets_generators_and_keeps_dimension() {
        let (alg, spec) = algebra(Family::A, 2, LatticeKind::Weight);
        let ps = principal_series(&alg, &spec, &generic_t(&alg)).unwrap();
        let r = ps.res(&[0]);
        assert_eq!(r.dim(), 6);
        assert_eq!(r.generator_set(), &[0]);
        assert!(r.gen_mat(1).is_none());
        assert!(r.gen_mat(alg.aw.rank()).is_none(), "affine generator is forgotten");
        r.verify_relations().unwrap();
        // Restriction to the full set changes nothing.
        let full = ps.res(&[0, 1]);
        assert!(full.gen_mat(alg.aw.rank()).is_some());
        assert_eq!(full.gen_mat(0).unwrap(), ps.gen_mat(0).unwrap());
    }

    #[test]
    fn induction_dimension_formula_and_transitivity() {
        // Finite Hecke: inducing the trivial module of the node-0 line in A2
        // gives [W : W_I] = 3 dimensions.
        let (alg, spec) = algebra(Family::A, 2, LatticeKind::Weight);
        let triv = HeckeModule::finite_trivial(&alg, &spec, &[0]).unwrap();
        let ind = triv.ind_to(&[0, 1]).unwrap();
        assert_eq!(ind.dim(), 3);
        ind.verify_relations().unwrap();

        // Dimension formula across every parabolic of A3.
        let (alg, spec) = algebra(Family::A, 3, LatticeKind::Root);
        let wg = &alg.aw.w;
        for i_set in subsets_of(3) {
            let triv = HeckeModule::finite_trivial(&alg, &spec, &i_set).unwrap();
            let ind = triv.ind_to(&[0, 1, 2]).unwrap();
            assert_eq!(ind.dim() * wg.parabolic(&i_set).order(), wg.n);
        }

        // Character-level transitivity through a middle parabolic: inducing
        // e ⊆ {0} ⊆ {0,1} in two steps matches the direct induction.
        let (alg, spec) = algebra(Family::A, 2, LatticeKind::Weight);
        let base = HeckeModule::finite_one_dim(&alg, &spec, &[], &BTreeMap::new()).unwrap();
        let direct = base.ind_to(&[0, 1]).unwrap();
        let two_step = base.ind_to(&[0]).unwrap().ind_to(&[0, 1]).unwrap();
        assert_eq!(direct.dim(), two_step.dim());
        for v in 0..alg.aw.w.n {
            let w = alg.aw.from_finite(v);
            assert_eq!(direct.trace(&w).unwrap(), two_step.trace(&w).unwrap());
        }
    }

    #[test]
    fn inducing_a_broken_module_is_rejected() {
        let (alg, spec) = algebra(Family::A, 2, LatticeKind::Weight);
        // T ↦ 2 violates the quadratic relation (roots are q and −1).
        let mut vals = BTreeMap::new();
        vals.insert(0usize, int(2));
        let err = HeckeModule::finite_one_dim(&alg, &spec, &[0], &vals).unwrap_err();
        assert!(matches!(err, Error::NotAModule(_)));
    }

    #[test]
    fn star_twist_is_involutive_and_explicit_on_generators() {
        let (alg, spec) = algebra(Family::B, 2, LatticeKind::Weight);
        let ps = principal_series(&alg, &spec, &generic_t(&alg)).unwrap();
        let tw = ps.twist_star().unwrap();
        // Twisted generator action is (q_s − 1)·Id − π(T_s).
        for s in 0..=alg.aw.rank() {
            let q = alg.params.q_of_gen(s).specialize(&spec);
            let expect = QMat::identity(ps.dim()).scale(&(q - int(1))).sub(ps.gen_mat(s).unwrap());
            assert_eq!(tw.gen_mat(s).unwrap(), &expect);
        }
        // Twisting twice restores every stored matrix.
        let back = tw.twist_star().unwrap();
        for s in 0..=alg.aw.rank() {
            assert_eq!(back.gen_mat(s).unwrap(), ps.gen_mat(s).unwrap());
        }
        for k in 0..alg.aw.rank() {
            assert_eq!(back.theta_basis_mat(k), ps.theta_basis_mat(k));
        }
        // Trace over the twist equals the trace of the starred element.
        for w in alg.aw.extended_ball(2) {
            let starred = alg.star(&alg.t_basis(&w));
            assert_eq!(tw.trace(&w).unwrap(), ps.act_im(&starred).unwrap().trace());
        }
    }

    #[test]
    fn duality_summands_match_the_subset_lattice() {
        // Finite rank one, trivial module: D = [Ind_∅ triv] − [triv], a
        // 2-dimensional summand minus the module itself.
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root);
        let triv = HeckeModule::finite_trivial(&alg, &spec, &[0]).unwrap();
        let d = d_operator(&triv).unwrap();
        assert_eq!(d.summands.len(), 2);
        let dims: Vec<(i64, usize)> = d.summands.iter().map(|(s, m)| (*s, m.dim())).collect();
        assert!(dims.contains(&(1, 2)) && dims.contains(&(-1, 1)));

        // Affine rank one principal series: subset sizes give 2·2 and 2.
        let ps = principal_series(&alg, &spec, &generic_t(&alg)).unwrap();
        let d = d_operator(&ps).unwrap();
        assert_eq!(d.summands.len(), 2);
        let dims: Vec<(i64, usize)> = d.summands.iter().map(|(s, m)| (*s, m.dim())).collect();
        assert!(dims.contains(&(1, 4)) && dims.contains(&(-1, 2)));
    }

    #[test]
    fn virtual_traces_cancel_and_count_dimensions() {
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root);
        let triv = HeckeModule::finite_trivial(&alg, &spec, &[0]).unwrap();
        let v = VirtualModule::of(triv.clone());
        let cancel = VirtualModule {
            summands: vec![(1, triv.clone()), (-1, triv.clone())],
        };
        for w in [alg.aw.identity(), alg.aw.gen(0)] {
            assert_eq!(cancel.trace(&w).unwrap(), int(0));
        }
        assert_eq!(v.virtual_dim(), 1);
        assert_eq!(d_operator(&triv).unwrap().virtual_dim(), 2 - 1);

        // Duality traces match star-twist traces at T_e and the generator.
        let d = d_operator(&triv).unwrap();
        let tw = VirtualModule::of(triv.twist_star().unwrap());
        for w in [alg.aw.identity(), alg.aw.gen(0)] {
            assert_eq!(d.trace(&w).unwrap(), tw.trace(&w).unwrap());
        }
    }

    #[test]
    fn duality_equals_star_twist_for_the_finite_algebra() {
        // Complete witness: the finite basis is finite, so the comparison at
        // bound ℓ(w_0) decides equality in the Grothendieck group.
        for (family, rank) in [(Family::A, 2), (Family::B, 2)] {
            let (alg, spec) = algebra(family, rank, LatticeKind::Weight);
            let triv =
                HeckeModule::finite_trivial(&alg, &spec, &(0..rank).collect::<Vec<_>>()).unwrap();
            let d = d_operator(&triv).unwrap();
            let tw = VirtualModule::of(triv.twist_star().unwrap());
            let report = grothendieck_equal(&d, &tw, 16).unwrap();
            assert!(report.equal, "{family:?}{rank}: {:?}", report.first_discrepancy);
            assert!(report.complete);
        }
    }

    #[test]
    fn duality_equals_star_twist_for_principal_series() {
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root);
        let ps = principal_series(&alg, &spec, &generic_t(&alg)).unwrap();
        let d = d_operator(&ps).unwrap();
        let tw = VirtualModule::of(ps.twist_star().unwrap());
        let report = grothendieck_equal(&d, &tw, 5).unwrap();
        assert!(report.equal, "{:?}", report.first_discrepancy);
        assert!(!report.complete, "affine witness is a truncation");
        assert!(report.elements_checked > 5);
    }

    #[test]
    fn duality_is_an_involution_on_virtual_traces() {
        let (alg, spec) = algebra(Family::A, 2, LatticeKind::Weight);
        let triv = HeckeModule::finite_trivial(&alg, &spec, &[0, 1]).unwrap();
        let v = VirtualModule::of(triv);
        let dd = d_operator_virtual(&d_operator_virtual(&v).unwrap()).unwrap();
        let report = grothendieck_equal(&dd, &v, 16).unwrap();
        assert!(report.equal, "{:?}", report.first_discrepancy);
        assert!(report.complete);
    }

    #[test]
    fn corrupted_sign_is_caught_with_a_witness() {
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root);
        let triv = HeckeModule::finite_trivial(&alg, &spec, &[0]).unwrap();
        let v = VirtualModule::of(triv);
        let report = grothendieck_equal(&v, &v.negated(), 4).unwrap();
        assert!(!report.equal);
        let (w, a, b) = report.first_discrepancy.unwrap();
        assert_eq!(w, alg.aw.identity(), "discrepancy already at the identity trace");
        assert_eq!(a, int(1));
        assert_eq!(b, int(-1));
    }

    #[test]
    fn kernel_intersection_has_module_dimension() {
        // The alternating-sign tuples are the whole intersection, so the
        // dimension equals dim M exactly.
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root);
        let ps = principal_series(&alg, &spec, &generic_t(&alg)).unwrap();
        assert_eq!(kernel_intersection_dim(&ps).unwrap(), 2);

        let (alg, spec) = algebra(Family::A, 2, LatticeKind::Weight);
        let ps = principal_series(&alg, &spec, &generic_t(&alg)).unwrap();
        assert_eq!(kernel_intersection_dim(&ps).unwrap(), 6);
    }

    #[test]
    fn unequal_parameters_run_through_the_whole_pipeline() {
        // B2 on the weight lattice with q = 4 on one orbit and 9 on the
        // other: duality versus star twist at a small affine bound.
        let datum = build_root_datum(Family::B, 2, LatticeKind::Weight).unwrap();
        let assignment = ParamAssignment::from_simple_values(&datum, &[1, 2], Some(&[1, 2])).unwrap();
        let alg = Arc::new(HeckeAlgebra::new(&datum, &assignment).unwrap());
        let spec = alg.params.spec_from_values(&[int(4), int(9)]).unwrap();
        let t = generic_t(&alg);
        let ps = principal_series(&alg, &spec, &t).unwrap();
        assert_eq!(ps.dim(), 8);
        let d = d_operator(&ps).unwrap();
        let tw = VirtualModule::of(ps.twist_star().unwrap());
        let report = grothendieck_equal(&d, &tw, 3).unwrap();
        assert!(report.equal, "{:?}", report.first_discrepancy);
    }
}
