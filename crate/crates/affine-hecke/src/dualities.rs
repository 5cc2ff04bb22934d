//! Duality checkers: alternating sums of parabolic inductions compared
//! against explicit involutions, at three levels.
//!
//! For a class function χ on a finite reflection group W the alternating sum
//! Σ_{I ⊆ S} (−1)^{|I|} Ind_{W_I}^W Res_{W_I}^W (χ) equals the sign twist
//! w ↦ det(w)·χ(w).  The relative version fixes a subset I0 ⊆ S and a
//! subgroup H of the normalizer of W_{I0}; the inner sum then runs over
//! double cosets W_I\C_{I0}(I)/H where C_{I0}(I) = {w : wI0 ⊂ ⟨I⟩}, and the
//! right-hand side picks up (−1)^{|I0|}·det(·|_{I0⊥}).
//!
//! At the module level the same alternating sum of Ind∘Res, taken in the
//! Grothendieck group of a finite or affine Hecke algebra, equals the class
//! of the module twisted by the involution T_w ↦ (−1)^{ℓ(w_fin)} q(w)
//! T_{w^{-1}}^{-1}.  The comparison is by exact traces on the basis family
//! {T_γ T_w}, complete for finite algebras and up to a stated length bound
//! for affine ones.  The element χ = Σ_{v ∈ W} (−1)^{ℓ(v)} T_v ⊗ T_v^{-1}
//! realizes the duality on modules induced from the commutative subalgebra:
//! it conjugates every generator to its twisted form, an identity of exact
//! matrices that [`chi_intertwiner_check`] verifies operator by operator.
//!
//! Finally, ramification data transport the relative identity to the Hecke
//! algebra of the smaller reflection group R(Λ) ⊆ W that permutes a set
//! Γ of admitted roots: [`build_ramification`] constructs and verifies the
//! datum (admitted roots, their reflections v[a, I0] = u·t, the simple set
//! Δ(Λ), parameters p_a), [`EAlgebra`] realizes the Hecke algebra on
//! (R(Λ), S(Λ)) with parameters p_a, and [`hl_analogue_check`] compares the
//! double-coset-indexed alternating sum with the twist by
//! T_w ↦ (−1)^{|I0| + ℓ_{I0⊥}(w)} p_w T_{w^{-1}}^{-1}.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::affine_weyl::AffineWeylElement;
use crate::coefficients::int;
use crate::error::{Error, Result};
use crate::hecke_modules::{d_operator, AlgebraPart, HeckeModule, VirtualModule};
use crate::linalg::QMat;
use crate::report::VerificationReport;
use crate::weyl::{subsets_of, ClassFunction, Subgroup, WeylGroup};

/// Debug knob for negative controls: flips the sign of the dual (right-hand)
/// side of every identity, which must turn each passing suite into a
/// reported failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Corruption {
    #[default]
    None,
    FlipDualSign,
}

impl Corruption {
    pub fn sign(self) -> i64 {
        match self {
            Corruption::None => 1,
            Corruption::FlipDualSign => -1,
        }
    }

    pub fn rat(self) -> BigRational {
        int(self.sign())
    }
}

/// Reduced-word label with 1-based node numbers ("s1 s3", "e").
pub fn word_label(w: &WeylGroup, g: usize) -> String {
    if g == w.identity() {
        return "e".into();
    }
    w.word(g).iter().map(|&s| format!("s{}", s + 1)).collect::<Vec<_>>().join(" ")
}

/// Label for an extended affine element w = fin · t(x).
pub fn aw_label(w: &WeylGroup, g: &AffineWeylElement) -> String {
    let csv =
        g.trans.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",");
    match (g.fin != w.identity(), g.trans.iter().any(|&t| t != 0)) {
        (false, false) => "e".into(),
        (true, false) => word_label(w, g.fin),
        (false, true) => format!("t({csv})"),
        (true, true) => format!("{} t({csv})", word_label(w, g.fin)),
    }
}

pub(crate) fn set_label(i_set: &[usize]) -> String {
    if i_set.is_empty() {
        "∅".into()
    } else {
        i_set.iter().map(|&i| format!("s{}", i + 1)).collect::<Vec<_>>().join(",")
    }
}

fn mat_digest(m: &QMat) -> String {
    let mut sum = BigRational::zero();
    let mut weighted = BigRational::zero();
    for i in 0..m.rows {
        for j in 0..m.cols {
            sum += &m[(i, j)];
            weighted += &m[(i, j)] * int(((i + 1) * (j + 1)) as i64);
        }
    }
    format!("Σ={sum} Σw={weighted}")
}

fn instance_of(m: &HeckeModule) -> String {
    let alg = m.algebra();
    let d = alg.datum();
    let top = match m.part() {
        AlgebraPart::Finite => alg.aw.rank() - 1,
        AlgebraPart::Affine => alg.aw.rank(),
    };
    let qs: Vec<String> = (0..=top)
        .map(|s| alg.params.q_of_gen(s).specialize(m.spec()).to_string())
        .collect();
    format!(
        "{} {}-lattice dim={} q=[{}]",
        d.cartan_type,
        d.lattice_kind,
        m.dim(),
        qs.join(",")
    )
}

/// Σ_{I ⊆ S} (−1)^{|I|} Ind_{W_I}^W Res_{W_I}^W (χ) = det·χ, classwise.
pub fn solomon_check(
    w: &WeylGroup,
    chi: &ClassFunction,
    corrupt: Corruption,
) -> Result<VerificationReport> {
    let full = w.full_subgroup();
    if chi.group != full {
        return Err(Error::NotASubgroup);
    }
    let mut lhs = ClassFunction::from_fn(w, &full, |_| BigRational::zero());
    for i_set in subsets_of(w.datum.rank) {
        let sub = w.parabolic(&i_set);
        let term = chi.restrict(w, &sub)?.induce(w, &full)?;
        lhs = if i_set.len() % 2 == 0 { lhs.add(&term) } else { lhs.sub(&term) };
    }
    let rhs = chi.sign_twist(w).scale(&corrupt.rat());

    let mut report = VerificationReport::new(
        "solomon",
        format!("{} character of degree {}", w.datum.cartan_type, chi.degree()),
    );
    for class in &lhs.classes {
        let g = class[0];
        let (a, b) = (lhs.value(g), rhs.value(g));
        report.record(
            format!("class of {}", word_label(w, g)),
            a.to_string(),
            b.to_string(),
            a == b,
        );
    }
    Ok(report)
}

/// The relative alternating sum over double cosets W_I\C_{I0}(I)/H against
/// (−1)^{|I0|}·det(·|_{I0⊥})·χ, for any H ≤ N_W(W_{I0}) and χ on H.
pub fn hl_character_check(
    w: &WeylGroup,
    i0: &[usize],
    h: &Subgroup,
    chi: &ClassFunction,
    corrupt: Corruption,
) -> Result<VerificationReport> {
    let w_i0 = w.parabolic(i0);
    for &g in &h.ids {
        if w_i0.conjugated(w, g) != w_i0 {
            return Err(Error::NotInNormalizer);
        }
    }
    if chi.group != *h {
        return Err(Error::NotASubgroup);
    }

    let mut lhs = ClassFunction::from_fn(w, h, |_| BigRational::zero());
    for i_set in subsets_of(w.datum.rank) {
        let c = w.c_set(i0, &i_set);
        if c.is_empty() {
            continue;
        }
        let negate = i_set.len() % 2 == 1;
        for rep in w.double_coset_reps(&i_set, h, &c, None)? {
            let k = w.parabolic(&i_set).conjugated(w, rep).intersect(w, h);
            let term = chi.restrict(w, &k)?.induce(w, h)?;
            lhs = if negate { lhs.sub(&term) } else { lhs.add(&term) };
        }
    }

    let i0_sign = int(if i0.len() % 2 == 0 { 1 } else { -1 });
    let mut rhs_values: BTreeMap<usize, BigRational> = BTreeMap::new();
    for &g in &h.ids {
        let det = int(w.det_on_perp(g, i0)?);
        rhs_values.insert(g, &i0_sign * &det * chi.value(g) * &corrupt.rat());
    }
    let rhs = ClassFunction::from_fn(w, h, |g| rhs_values[&g].clone());

    let mut report = VerificationReport::new(
        "hl-char",
        format!(
            "{} I0={{{}}} |H|={} χ of degree {}",
            w.datum.cartan_type,
            set_label(i0),
            h.order(),
            chi.degree()
        ),
    );
    for class in &lhs.classes {
        let g = class[0];
        let (a, b) = (lhs.value(g), rhs.value(g));
        report.record(
            format!("class of {}", word_label(w, g)),
            a.to_string(),
            b.to_string(),
            a == b,
        );
    }
    Ok(report)
}

/// Trace equality of Σ_{I ⊆ S} (−1)^{|I|} [Ind_I Res_I M] and the class of
/// the star-twisted module, complete for finite-algebra modules and over the
/// length-`bound` ball for affine ones.
pub fn kato_check(
    m: &HeckeModule,
    bound: usize,
    corrupt: Corruption,
) -> Result<VerificationReport> {
    let aw = &m.algebra().aw;
    let (suite, eff_bound, complete) = match m.part() {
        AlgebraPart::Finite => {
            let all: Vec<usize> = (0..aw.rank()).collect();
            let lw0 = aw.w.length(aw.w.longest_element(&all));
            ("kato-finite", lw0, true)
        }
        AlgebraPart::Affine => ("kato-affine", bound, false),
    };
    let lhs = d_operator(m)?;
    let rhs = VirtualModule { summands: vec![(corrupt.sign(), m.twist_star()?)] };

    let mut lt: BTreeMap<AffineWeylElement, BigRational> =
        lhs.trace_table(eff_bound)?.into_iter().collect();
    let mut rt: BTreeMap<AffineWeylElement, BigRational> =
        rhs.trace_table(eff_bound)?.into_iter().collect();
    let mut keys: Vec<AffineWeylElement> =
        lt.keys().chain(rt.keys()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    keys.sort_by_key(|g| (aw.aw_length(g), g.clone()));

    let mut report = VerificationReport::new(
        suite,
        format!(
            "{} family {{T_γT_w : ℓ(w) ≤ {}}}{}",
            instance_of(m),
            eff_bound,
            if complete { " (complete basis)" } else { " (truncated)" }
        ),
    );
    let zero = BigRational::zero();
    for g in keys {
        let a = lt.remove(&g).unwrap_or_else(|| zero.clone());
        let b = rt.remove(&g).unwrap_or_else(|| zero.clone());
        report.record(aw_label(&aw.w, &g), a.to_string(), b.to_string(), a == b);
    }
    Ok(report)
}

/// Realize χ = Σ_{v ∈ W} (−1)^{ℓ(v)} T_v ⊗ T_v^{-1} through its action on
/// the subspace 1 ⊗ M: the map M → 𝓗 ⊗_{𝓗_∅} M, m ↦ Σ_v (−1)^{ℓ(v)}
/// T_v ⊗ π(T_v^{-1}) m, whose T_v-block row is the signed inverse action.
/// The identities are checked as exact matrix equations between maps:
/// (T_s ⊗ 1)·χ = χ·(1 ⊗ −q_s T_s^{-1}) for every s including the affine
/// node, and (T_γ ⊗ 1)·χ = (−1)^{ℓ(γ_fin)} χ·(1 ⊗ T_γ) on the length-zero
/// subgroup.  (They hold only over the balanced tensor product: the affine
/// node's proof slides commutative-subalgebra factors across ⊗, so χ is a
/// map out of M rather than an endomorphism of the induced space.)
pub fn chi_intertwiner_check(
    m: &HeckeModule,
    corrupt: Corruption,
) -> Result<VerificationReport> {
    let alg = m.algebra().clone();
    let aw = &alg.aw;
    let wg = &aw.w;
    if m.part() != AlgebraPart::Affine || m.generator_set().len() != aw.rank() {
        return Err(Error::AssumptionViolated(
            "the intertwiner lives on modules over the whole affine algebra".into(),
        ));
    }
    let nw = wg.n;
    let d = m.dim();
    let ind = m.res(&[]).ind_full()?;
    debug_assert_eq!(ind.dim(), nw * d);

    // The coset basis of the induced module is {T_x ⊗ e_j} with x running
    // over W in id order, so block row x of a map into it is the
    // T_x-component.
    let mut x_mat = QMat::zeros(nw * d, d);
    for v in 0..nw {
        let pi = m.act_im(&alg.t_inverse(&aw.from_finite(v)))?;
        let sign = int(wg.sign(v));
        for i in 0..d {
            for j in 0..d {
                x_mat[(v * d + i, j)] = &pi[(i, j)] * &sign;
            }
        }
    }

    let mut report = VerificationReport::new("chi-intertwiner", instance_of(m));
    report.record(
        "χ ≠ 0",
        if x_mat.is_zero() { "0" } else { "nonzero" }.to_string(),
        "nonzero".to_string(),
        !x_mat.is_zero(),
    );

    for s in 0..=aw.rank() {
        let lhs = ind.gen_mat(s).expect("induced module is full").mul(&x_mat);
        let q_s = alg.params.q_of_gen(s).specialize(m.spec());
        let ts_inv = m
            .gen_mat(s)
            .expect("full module")
            .inverse()
            .ok_or_else(|| Error::NotAModule("T at each node must act invertibly".into()))?;
        let rhs = x_mat.mul(&ts_inv.scale(&(-q_s * corrupt.rat())));
        let label =
            if s == aw.rank() { "s0".to_string() } else { format!("s{}", s + 1) };
        report.record(
            format!("(T_{label} ⊗ 1)·χ = χ·(1 ⊗ −q T_{label}⁻¹)"),
            mat_digest(&lhs),
            mat_digest(&rhs),
            lhs == rhs,
        );
    }
    for (k, (gamma, mg)) in ind.omega_mats().iter().enumerate() {
        let (g2, small) = &m.omega_mats()[k];
        debug_assert_eq!(gamma, g2);
        let lhs = mg.mul(&x_mat);
        let sgn = int(wg.sign(gamma.fin)) * corrupt.rat();
        let rhs = x_mat.mul(small).scale(&sgn);
        report.record(
            format!("(T_γ ⊗ 1)·χ, γ = {}", aw_label(wg, gamma)),
            mat_digest(&lhs),
            mat_digest(&rhs),
            lhs == rhs,
        );
    }
    Ok(report)
}

/// How the group W(Λ) of a ramification datum is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RamificationMode {
    /// Empty base subset: every root is admitted and the datum degenerates
    /// to the plain finite Hecke algebra of W.
    Degenerate,
    /// W(Λ) is the full set-stabilizer S_{I0} of the base simple roots.
    FullStabilizer,
}

/// The combinatorial core of a ramified endomorphism algebra: the admitted
/// roots Γ, their reflections v[a, I0], the simple subset Δ(Λ), the
/// reflection group R(Λ) they generate inside S_{I0}, and the parameters
/// p_a.  All structural facts are verified at construction time.
#[derive(Debug, Clone)]
pub struct RamificationDatum {
    pub i0: Vec<usize>,
    /// Admitted root indices.  Membership is decided by the simple-system
    /// condition, which is not symmetric under negation.
    pub gamma: Vec<usize>,
    /// a ↦ v[a, I0] = u·t, with u the longest element of the reflection
    /// subgroup on I0 ∪ {a} and t the longest element of W_{I0}.
    pub v_of: BTreeMap<usize, usize>,
    /// Members a of Γ⁺ = Γ ∩ Σ⁺ whose reflection inverts no other member:
    /// N(v[a, I0]) ∩ Γ = {a}.
    pub delta: Vec<usize>,
    /// Group ids of v[a, I0] for a ∈ delta — the simple generators S(Λ).
    pub gens: Vec<usize>,
    pub r_group: Subgroup,
    pub w_lambda: Subgroup,
    /// The complement {x ∈ W(Λ) : xΓ⁺ = Γ⁺}; W(Λ) = C(Λ) ⋉ R(Λ).
    pub c_group: Subgroup,
    pub c_trivial: bool,
    /// Parameter of every member of Γ, constant on R(Λ)-orbits and on sign
    /// pairs.
    pub p: BTreeMap<usize, BigRational>,
    /// Reduced words over `gens` for every element of R(Λ).
    words: BTreeMap<usize, Vec<usize>>,
}

impl RamificationDatum {
    /// Length of w in the Coxeter system (R(Λ), S(Λ)), i.e. after projecting
    /// the action to I0⊥.
    pub fn ell_perp(&self, g: usize) -> usize {
        self.words[&g].len()
    }

    /// A reduced word for g over the generator list `gens`.
    pub fn word(&self, g: usize) -> &[usize] {
        &self.words[&g]
    }

    pub fn gamma_plus(&self, w: &WeylGroup) -> Vec<usize> {
        self.gamma
            .iter()
            .copied()
            .filter(|&a| w.datum.roots[a].is_positive())
            .collect()
    }

    /// N(g) ∩ Γ: the ambient-positive members of Γ sent negative by g.
    pub fn inversions_in_gamma(&self, w: &WeylGroup, g: usize) -> Vec<usize> {
        self.gamma
            .iter()
            .copied()
            .filter(|&a| {
                w.datum.roots[a].is_positive()
                    && !w.datum.roots[w.root_image(g, a)].is_positive()
            })
            .collect()
    }

    /// p_g = Π_{a ∈ N(g) ∩ Γ} p_a.
    pub fn p_of(&self, w: &WeylGroup, g: usize) -> BigRational {
        self.inversions_in_gamma(w, g)
            .iter()
            .fold(BigRational::one(), |acc, a| acc * &self.p[a])
    }
}

fn canon_signed(v: &[BigRational]) -> Option<Vec<BigRational>> {
    let lead = v.iter().find(|c| !c.is_zero())?;
    let scale = lead.abs().recip();
    Some(v.iter().map(|c| c * &scale).collect())
}

fn neg_vec(v: &[BigRational]) -> Vec<BigRational> {
    v.iter().map(|c| -c).collect()
}

/// Construct a ramification datum on (W, I0) and verify every structural
/// invariant: each v[a, I0] is an involution stabilizing the base set, R(Λ)
/// is normal in W(Λ) with complement C(Λ), the projections of Γ to I0⊥ form
/// a root system whose positive half is spanned nonnegatively by the
/// projection of Δ(Λ), the word length over S(Λ) matches the projected
/// inversion count and the determinant sign on I0⊥, and the parameters are
/// constant on orbits with p_g multiplicative along reduced words.
///
/// `p_values` supplies one parameter per member of Δ(Λ) in ascending root
/// order; values on the rest of Γ follow by orbit propagation.
pub fn build_ramification(
    w: &WeylGroup,
    i0: &[usize],
    mode: RamificationMode,
    p_values: &[BigRational],
    require_c_trivial: bool,
) -> Result<RamificationDatum> {
    let d = &w.datum;
    let mut i0: Vec<usize> = i0.to_vec();
    i0.sort_unstable();
    i0.dedup();
    if mode == RamificationMode::Degenerate && !i0.is_empty() {
        return Err(Error::IllegalParameter(
            "degenerate ramification data require an empty base subset".into(),
        ));
    }
    let w_lambda = match mode {
        RamificationMode::Degenerate => w.full_subgroup(),
        RamificationMode::FullStabilizer => w.stabilizer_s_i0(&i0),
    };

    let simple_ids: Vec<usize> = (0..d.rank).map(|i| d.simple_root_index(i)).collect();
    let i0_root_ids: Vec<usize> = i0.iter().map(|&i| d.simple_root_index(i)).collect();
    let t = w.longest_element(&i0);

    let in_span_i0 = |a: usize| -> bool {
        d.roots[a]
            .root_coeffs
            .iter()
            .enumerate()
            .all(|(k, &c)| c == 0 || i0.contains(&k))
    };
    // Some element of W must carry I0 ∪ {a} into the simple system.
    let maps_to_simples = |a: usize| -> bool {
        (0..w.n).any(|g| {
            simple_ids.contains(&w.root_image(g, a))
                && i0_root_ids.iter().all(|&r| simple_ids.contains(&w.root_image(g, r)))
        })
    };

    let mut gamma = Vec::new();
    let mut v_of = BTreeMap::new();
    for a in 0..d.roots.len() {
        if in_span_i0(a) || !maps_to_simples(a) {
            continue;
        }
        let mut refl: Vec<usize> = i0_root_ids.iter().map(|&r| w.reflection(r)).collect();
        refl.push(w.reflection(a));
        let sub = Subgroup::from_generators(w, &refl);
        let sub_pos: Vec<usize> =
            (0..d.n_positive).filter(|&r| sub.contains(w.reflection(r))).collect();
        // The longest element of the reflection subgroup: the unique member
        // sending every subsystem-positive root to a negative one.
        let u = sub
            .ids
            .iter()
            .copied()
            .find(|&g| sub_pos.iter().all(|&r| !d.roots[w.root_image(g, r)].is_positive()))
            .expect("a finite reflection subgroup has a longest element");
        let v = w.mul(u, t);
        if w_lambda.contains(v) {
            gamma.push(a);
            v_of.insert(a, v);
        }
    }

    let gamma_pos: Vec<usize> =
        gamma.iter().copied().filter(|&a| d.roots[a].is_positive()).collect();
    let mut delta = Vec::new();
    for &a in &gamma_pos {
        let v = v_of[&a];
        let kicked: Vec<usize> = gamma_pos
            .iter()
            .copied()
            .filter(|&r| !d.roots[w.root_image(v, r)].is_positive())
            .collect();
        if kicked == [a] {
            delta.push(a);
        }
    }

    let mut gens: Vec<usize> = delta.iter().map(|&a| v_of[&a]).collect();
    gens.sort_unstable();
    gens.dedup();
    let r_group = Subgroup::from_generators(w, &gens);

    let c_ids: Vec<usize> = w_lambda
        .ids
        .iter()
        .copied()
        .filter(|&g| {
            let mut img: Vec<usize> =
                gamma_pos.iter().map(|&r| w.root_image(g, r)).collect();
            img.sort_unstable();
            img == gamma_pos
        })
        .collect();
    let c_group = Subgroup::from_ids(w, &c_ids);
    let c_trivial = c_group.order() == 1;
    if require_c_trivial && !c_trivial {
        return Err(Error::AssumptionViolated(format!(
            "the complement subgroup has order {}",
            c_group.order()
        )));
    }

    // Reduced words over the generators, by breadth-first search.
    let mut words: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    words.insert(w.identity(), Vec::new());
    let mut frontier = vec![w.identity()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &g in &frontier {
            let base = words[&g].clone();
            for (k, &vg) in gens.iter().enumerate() {
                let h2 = w.mul(g, vg);
                if let std::collections::btree_map::Entry::Vacant(e) = words.entry(h2) {
                    let mut word = base.clone();
                    word.push(k);
                    e.insert(word);
                    next.push(h2);
                }
            }
        }
        frontier = next;
    }
    debug_assert_eq!(words.len(), r_group.order());

    // Parameters: one value per member of Δ(Λ), propagated over sign pairs
    // and generator images until the orbit closure is covered.
    if p_values.len() != delta.len() {
        return Err(Error::InconsistentParameters(format!(
            "expected {} parameter values (one per member of the simple set), got {}",
            delta.len(),
            p_values.len()
        )));
    }
    for v in p_values {
        if !v.is_positive() {
            return Err(Error::IllegalParameter(format!("p = {v} must be positive")));
        }
    }
    let in_gamma: BTreeSet<usize> = gamma.iter().copied().collect();
    for &g in &gens {
        let mut img: Vec<usize> = gamma.iter().map(|&a| w.root_image(g, a)).collect();
        img.sort_unstable();
        if img != gamma {
            return Err(Error::AssumptionViolated(
                "the admitted root set is not stable under its reflection group".into(),
            ));
        }
    }
    let mut p: BTreeMap<usize, BigRational> =
        delta.iter().copied().zip(p_values.iter().cloned()).collect();
    loop {
        let mut changed = false;
        let snapshot: Vec<(usize, BigRational)> =
            p.iter().map(|(a, v)| (*a, v.clone())).collect();
        for (a, val) in snapshot {
            let mut targets: Vec<usize> =
                gens.iter().map(|&g| w.root_image(g, a)).collect();
            let na = d.neg_of[a];
            if in_gamma.contains(&na) {
                targets.push(na);
            }
            for b in targets {
                match p.get(&b) {
                    None => {
                        p.insert(b, val.clone());
                        changed = true;
                    }
                    Some(prev) if *prev == val => {}
                    Some(prev) => {
                        return Err(Error::InconsistentParameters(format!(
                            "roots {a} and {b} share an orbit but carry p = {val} and {prev}"
                        )))
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for &a in &gamma {
        if !p.contains_key(&a) {
            return Err(Error::InconsistentParameters(format!(
                "admitted root {a} is not reached by any parameter orbit"
            )));
        }
    }

    // --- Structural invariants. ---
    let s_i0 = w.stabilizer_s_i0(&i0);
    for (&a, &v) in &v_of {
        if !s_i0.contains(v) {
            return Err(Error::AssumptionViolated(format!(
                "v at root {a} does not stabilize the base simple set"
            )));
        }
        if w.mul(v, v) != w.identity() {
            return Err(Error::AssumptionViolated(format!(
                "v at root {a} is not an involution"
            )));
        }
    }
    if !r_group.is_subgroup_of(&w_lambda) {
        return Err(Error::AssumptionViolated(
            "the reflection part must lie inside the chosen group".into(),
        ));
    }
    for &g in &w_lambda.ids {
        if r_group.conjugated(w, g) != r_group {
            return Err(Error::AssumptionViolated(
                "the reflection part must be normal".into(),
            ));
        }
    }
    if c_group.order() * r_group.order() != w_lambda.order()
        || c_group.intersect(w, &r_group).order() != 1
    {
        return Err(Error::AssumptionViolated(
            "the group does not split as complement times reflection part".into(),
        ));
    }

    // Projection to I0⊥ along the invariant form: V = span(I0) ⊕ I0⊥.
    let perp = w.perp_basis(&i0);
    let span_cols = QMat::from_fn(d.rank, i0.len(), |r, c| int(d.simple_roots[i0[c]][r]));
    let a_full = span_cols.hcat(&perp);
    let a_inv = a_full.inverse().ok_or_else(|| {
        Error::AssumptionViolated("the perpendicular decomposition must be direct".into())
    })?;
    let proj_of = |a: usize| -> Vec<BigRational> {
        let x = QMat::from_fn(d.rank, 1, |r, _| int(d.roots[a].vec[r]));
        let c = a_inv.mul(&x);
        (i0.len()..d.rank).map(|r| c[(r, 0)].clone()).collect()
    };

    // The projected positive directions, each remembered through one
    // representative root.
    let mut dir_rep: BTreeMap<Vec<BigRational>, usize> = BTreeMap::new();
    for &a in &gamma_pos {
        let canon = canon_signed(&proj_of(a)).ok_or_else(|| {
            Error::AssumptionViolated(format!("admitted root {a} projects to zero"))
        })?;
        dir_rep.entry(canon).or_insert(a);
    }
    for dir in dir_rep.keys() {
        if dir_rep.contains_key(&neg_vec(dir)) {
            return Err(Error::AssumptionViolated(
                "the projected positive directions meet their own negatives".into(),
            ));
        }
    }
    // Every projected positive is a nonnegative combination of projected Δ.
    let delta_mat = QMat::from_fn(perp.cols, delta.len(), |r, c| proj_of(delta[c])[r].clone());
    for &a in &gamma_pos {
        let rhs = QMat::from_fn(perp.cols, 1, |r, _| proj_of(a)[r].clone());
        let sol = delta_mat.solve(&rhs).ok_or_else(|| {
            Error::AssumptionViolated(
                "projected positives do not lie in the span of the projected simple set"
                    .into(),
            )
        })?;
        if (0..sol.rows).any(|r| sol[(r, 0)].is_negative()) {
            return Err(Error::AssumptionViolated(format!(
                "projection of root {a} is not a nonnegative combination of the simple set"
            )));
        }
    }
    // Word length over S(Λ) = projected inversion count, and its parity is
    // the determinant on I0⊥; R(Λ) acts faithfully there.
    let mut perp_actions: Vec<QMat> = Vec::new();
    for (&g, word) in &words {
        let mut count = 0usize;
        for &a in dir_rep.values() {
            let canon = canon_signed(&proj_of(w.root_image(g, a)))
                .expect("images of admitted roots stay admitted");
            if dir_rep.contains_key(&canon) {
                // stays positive
            } else if dir_rep.contains_key(&neg_vec(&canon)) {
                count += 1;
            } else {
                return Err(Error::AssumptionViolated(format!(
                    "element {g} moves a projected direction outside the system"
                )));
            }
        }
        if count != word.len() {
            return Err(Error::AssumptionViolated(format!(
                "word length {} and inversion count {count} disagree at element {g}",
                word.len()
            )));
        }
        let det = w.det_on_perp(g, &i0)?;
        if det != if count % 2 == 0 { 1 } else { -1 } {
            return Err(Error::AssumptionViolated(format!(
                "determinant on the perpendicular space disagrees with length parity at {g}"
            )));
        }
        if perp.cols > 0 {
            let act = perp
                .solve(&w.mat(g).to_qmat().mul(&perp))
                .ok_or(Error::NotInNormalizer)?;
            perp_actions.push(act);
        }
    }
    for i in 0..perp_actions.len() {
        for j in (i + 1)..perp_actions.len() {
            if perp_actions[i] == perp_actions[j] {
                return Err(Error::AssumptionViolated(
                    "the reflection part does not act faithfully on I0⊥".into(),
                ));
            }
        }
    }

    let rd = RamificationDatum {
        i0,
        gamma,
        v_of,
        delta,
        gens,
        r_group,
        w_lambda,
        c_group,
        c_trivial,
        p,
        words,
    };
    // p is multiplicative along reduced words.  (Letters index `gens`,
    // which is id-sorted and so need not align with the root order of
    // `delta`; recover each letter's parameter through its reflection.)
    let p_letter: Vec<BigRational> = rd
        .gens
        .iter()
        .map(|&vg| {
            let a = rd
                .delta
                .iter()
                .copied()
                .find(|&a| rd.v_of[&a] == vg)
                .expect("every generator is the reflection of one simple member");
            rd.p[&a].clone()
        })
        .collect();
    for (&g, word) in &rd.words {
        let via_word =
            word.iter().fold(BigRational::one(), |acc, &k| acc * &p_letter[k]);
        if via_word != rd.p_of(w, g) {
            return Err(Error::InconsistentParameters(format!(
                "p is not multiplicative along the reduced word of element {g}"
            )));
        }
    }
    Ok(rd)
}

/// The finite Hecke algebra on the Coxeter system (R(Λ), S(Λ)) with
/// parameters p_a, acting through exact matrices on its modules.
#[derive(Debug, Clone)]
pub struct EAlgebra {
    pub rd: RamificationDatum,
    /// Elements of R(Λ) sorted by (ℓ_{I0⊥}, id) — the trace family.
    pub elements: Vec<usize>,
    /// p of each simple generator, aligned with `rd.gens`.
    pub p_gen: Vec<BigRational>,
    /// Order of v_g·v_h in the ambient group, for every generator pair.
    braid: Vec<Vec<usize>>,
}

/// A module over [`EAlgebra`] or one of its parabolic subalgebras, stored as
/// one exact matrix per carried generator.
#[derive(Debug, Clone)]
pub struct EModule {
    pub dim: usize,
    /// Indices into the algebra's generator list.
    pub j_set: Vec<usize>,
    /// Action matrices aligned with `j_set`.
    pub mats: Vec<QMat>,
}

fn braid_prod(a: &QMat, b: &QMat, m: usize) -> QMat {
    let mut acc = QMat::identity(a.rows);
    for i in 0..m {
        acc = acc.mul(if i % 2 == 0 { a } else { b });
    }
    acc
}

impl EAlgebra {
    pub fn new(w: &WeylGroup, rd: RamificationDatum) -> Result<Self> {
        let mut elements: Vec<usize> = rd.r_group.ids.clone();
        elements.sort_by_key(|&g| (rd.ell_perp(g), g));
        let p_gen: Vec<BigRational> = rd.gens.iter().map(|&g| rd.p_of(w, g)).collect();
        let ng = rd.gens.len();
        let mut braid = vec![vec![0usize; ng]; ng];
        for i in 0..ng {
            for j in 0..ng {
                let prod = w.mul(rd.gens[i], rd.gens[j]);
                let mut acc = prod;
                let mut m = 1;
                while acc != w.identity() {
                    acc = w.mul(acc, prod);
                    m += 1;
                }
                braid[i][j] = m;
            }
        }
        for i in 0..ng {
            for j in 0..ng {
                if braid[i][j] % 2 == 1 && p_gen[i] != p_gen[j] {
                    return Err(Error::InconsistentParameters(
                        "conjugate generators carry different parameters".into(),
                    ));
                }
            }
        }
        Ok(EAlgebra { rd, elements, p_gen, braid })
    }

    pub fn n_gens(&self) -> usize {
        self.rd.gens.len()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Wrap generator matrices into a module after checking the quadratic
    /// relation (T_g − p_g)(T_g + 1) = 0 for each carried generator and the
    /// braid relation for each pair.
    pub fn module(&self, j_set: &[usize], mats: Vec<QMat>) -> Result<EModule> {
        assert_eq!(j_set.len(), mats.len());
        let dim = mats.first().map(|m| m.rows).unwrap_or(0);
        for (pos, &k) in j_set.iter().enumerate() {
            let mi = &mats[pos];
            if mi.rows != dim || mi.cols != dim {
                return Err(Error::NotAModule("generator matrices must be square and equal-sized".into()));
            }
            let p = &self.p_gen[k];
            let expect = QMat::identity(dim)
                .scale(p)
                .add(&mi.scale(&(p - &BigRational::one())));
            if mi.mul(mi) != expect {
                return Err(Error::NotAModule(format!(
                    "quadratic relation fails at generator {k}"
                )));
            }
        }
        for (pi, &i) in j_set.iter().enumerate() {
            for (pj, &j) in j_set.iter().enumerate() {
                if pi >= pj {
                    continue;
                }
                let m = self.braid[i][j];
                if braid_prod(&mats[pi], &mats[pj], m) != braid_prod(&mats[pj], &mats[pi], m)
                {
                    return Err(Error::NotAModule(format!(
                        "braid relation fails between generators {i} and {j}"
                    )));
                }
            }
        }
        Ok(EModule { dim, j_set: j_set.to_vec(), mats })
    }

    /// All one-dimensional modules: each generator acts by p_g or by −1,
    /// constant along odd-order bonds.
    pub fn one_dim_modules(&self) -> Result<Vec<EModule>> {
        let ng = self.n_gens();
        let mut comp_id = vec![usize::MAX; ng];
        let mut n_comp = 0;
        for start in 0..ng {
            if comp_id[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp_id[start] = n_comp;
            while let Some(g) = stack.pop() {
                for h in 0..ng {
                    if comp_id[h] == usize::MAX && self.braid[g][h] % 2 == 1 {
                        comp_id[h] = n_comp;
                        stack.push(h);
                    }
                }
            }
            n_comp += 1;
        }
        let all: Vec<usize> = (0..ng).collect();
        let mut out = Vec::new();
        for mask in 0..(1u64 << n_comp) {
            let mats: Vec<QMat> = (0..ng)
                .map(|k| {
                    let val = if mask & (1 << comp_id[k]) != 0 {
                        self.p_gen[k].clone()
                    } else {
                        -BigRational::one()
                    };
                    QMat::from_fn(1, 1, |_, _| val.clone())
                })
                .collect();
            out.push(self.module(&all, mats)?);
        }
        Ok(out)
    }

    /// Forget the action of the generators outside `j_sub`.
    pub fn res(&self, m: &EModule, j_sub: &[usize]) -> EModule {
        let mats: Vec<QMat> = j_sub
            .iter()
            .map(|&k| {
                let pos = m
                    .j_set
                    .iter()
                    .position(|&x| x == k)
                    .expect("restriction stays inside the carried generators");
                m.mats[pos].clone()
            })
            .collect();
        EModule { dim: m.dim, j_set: j_sub.to_vec(), mats }
    }

    /// Action of T_g along the stored reduced word; g must lie in the
    /// sub-Coxeter group the module carries.
    pub fn act(&self, m: &EModule, g: usize) -> Result<QMat> {
        let mut acc = QMat::identity(m.dim);
        for &k in self.rd.word(g) {
            let pos = m.j_set.iter().position(|&x| x == k).ok_or_else(|| {
                Error::NotAModule("element acts outside the carried generators".into())
            })?;
            acc = acc.mul(&m.mats[pos]);
        }
        Ok(acc)
    }

    /// Induction from the parabolic subalgebra on `m.j_set` up to the whole
    /// algebra, on the basis {T_x ⊗ n} over minimal coset representatives.
    pub fn ind(&self, w: &WeylGroup, m: &EModule) -> Result<EModule> {
        let rd = &self.rd;
        let reps: Vec<usize> = self
            .elements
            .iter()
            .copied()
            .filter(|&x| {
                m.j_set
                    .iter()
                    .all(|&k| rd.ell_perp(w.mul(x, rd.gens[k])) > rd.ell_perp(x))
            })
            .collect();
        let rep_pos: BTreeMap<usize, usize> =
            reps.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let nd = m.dim;
        let dim = reps.len() * nd;

        // Split y = x·u with x a minimal representative and u in the
        // sub-Coxeter group, reading u off the stripped right descents.
        let split = |y: usize| -> (usize, Vec<usize>) {
            let mut x = y;
            let mut u_rev: Vec<usize> = Vec::new();
            'outer: loop {
                for &k in &m.j_set {
                    let xg = w.mul(x, rd.gens[k]);
                    if rd.ell_perp(xg) < rd.ell_perp(x) {
                        x = xg;
                        u_rev.push(k);
                        continue 'outer;
                    }
                }
                break;
            }
            u_rev.reverse();
            (x, u_rev)
        };
        let sigma = |word: &[usize]| -> Result<QMat> {
            let mut acc = QMat::identity(nd);
            for &k in word {
                let pos = m.j_set.iter().position(|&x| x == k).ok_or_else(|| {
                    Error::NotAModule("split leaves the carried generators".into())
                })?;
                acc = acc.mul(&m.mats[pos]);
            }
            Ok(acc)
        };
        let add_block = |out: &mut QMat, row: usize, col: usize, b: &QMat| {
            for i in 0..nd {
                for j in 0..nd {
                    if !b[(i, j)].is_zero() {
                        let cell = &mut out[(row * nd + i, col * nd + j)];
                        *cell = &*cell + &b[(i, j)];
                    }
                }
            }
        };

        let mut mats = Vec::new();
        for gk in 0..self.n_gens() {
            let mut out = QMat::zeros(dim, dim);
            let p = &self.p_gen[gk];
            for (col, &x) in reps.iter().enumerate() {
                let y = w.mul(rd.gens[gk], x);
                let (x2, uw) = split(y);
                if rd.ell_perp(y) > rd.ell_perp(x) {
                    add_block(&mut out, rep_pos[&x2], col, &sigma(&uw)?);
                } else {
                    add_block(&mut out, rep_pos[&x2], col, &sigma(&uw)?.scale(p));
                    add_block(
                        &mut out,
                        col,
                        col,
                        &QMat::identity(nd).scale(&(p - &BigRational::one())),
                    );
                }
            }
            mats.push(out);
        }
        let all: Vec<usize> = (0..self.n_gens()).collect();
        self.module(&all, mats)
    }

    /// Twist by T_g ↦ (p_g − 1)·Id − T_g, the generator form of
    /// p_g T_{g^{-1}}^{-1} with the sign of one inversion.
    pub fn twist_star(&self, m: &EModule) -> Result<EModule> {
        if m.j_set.len() != self.n_gens() {
            return Err(Error::AssumptionViolated(
                "the star twist needs a module over the whole algebra".into(),
            ));
        }
        let mats: Vec<QMat> = m
            .j_set
            .iter()
            .zip(&m.mats)
            .map(|(&k, mat)| {
                QMat::identity(m.dim)
                    .scale(&(&self.p_gen[k] - BigRational::one()))
                    .sub(mat)
            })
            .collect();
        self.module(&m.j_set, mats)
    }
}

/// The double-coset-indexed alternating sum of parabolic inductions over the
/// algebra of a ramification datum, compared against the twist by
/// T_w ↦ (−1)^{|I0| + ℓ_{I0⊥}(w)} p_w T_{w^{-1}}^{-1}, as exact traces on
/// the complete basis {T_w : w ∈ R(Λ)}.
pub fn hl_analogue_check(
    w: &WeylGroup,
    ea: &EAlgebra,
    m: &EModule,
    corrupt: Corruption,
) -> Result<VerificationReport> {
    let rd = &ea.rd;
    if !rd.c_trivial {
        return Err(Error::AssumptionViolated(
            "the complement subgroup must be trivial".into(),
        ));
    }
    if m.j_set.len() != ea.n_gens() {
        return Err(Error::NotAModule(
            "the identity is checked on modules over the whole algebra".into(),
        ));
    }
    let d = &w.datum;
    let simple_ids: Vec<usize> = (0..d.rank).map(|i| d.simple_root_index(i)).collect();
    let gamma_plus = rd.gamma_plus(w);

    let mut lhs: BTreeMap<usize, BigRational> =
        ea.elements.iter().map(|&g| (g, BigRational::zero())).collect();
    let mut indep_records: Vec<(String, String, String, bool)> = Vec::new();

    for i_set in subsets_of(d.rank) {
        let c = w.c_set(&rd.i0, &i_set);
        if c.is_empty() {
            continue;
        }
        let sign = int(if i_set.len() % 2 == 0 { 1 } else { -1 });
        let in_i = {
            let mut v = vec![false; d.rank];
            for &i in &i_set {
                v[i] = true;
            }
            v
        };
        // A good representative keeps the base simples simple and the
        // admitted positives positive.
        let good = |g: usize| -> bool {
            rd.i0
                .iter()
                .all(|&node| simple_ids.contains(&w.root_image(g, d.simple_root_index(node))))
                && gamma_plus
                    .iter()
                    .all(|&a| d.roots[w.root_image(g, a)].is_positive())
        };
        let good_ref: &dyn Fn(usize) -> bool = &good;
        let reps = w.double_coset_reps(&i_set, &rd.w_lambda, &c, Some(good_ref))?;
        for &rep in &reps {
            if !good(rep) {
                return Err(Error::NoGoodRepresentative(format!(
                    "double coset of {} for subset {{{}}}",
                    word_label(w, rep),
                    set_label(&i_set)
                )));
            }
            let term_table = |g2: usize| -> Result<Vec<BigRational>> {
                let mut j_set: Vec<usize> = Vec::new();
                for &a in &rd.delta {
                    let img = w.root_image(g2, a);
                    let inside = d.roots[img]
                        .root_coeffs
                        .iter()
                        .enumerate()
                        .all(|(n, &c0)| c0 == 0 || in_i[n]);
                    if inside {
                        let pos = rd
                            .gens
                            .iter()
                            .position(|&g| g == rd.v_of[&a])
                            .expect("every simple reflection is a generator");
                        j_set.push(pos);
                    }
                }
                j_set.sort_unstable();
                j_set.dedup();
                let ind = ea.ind(w, &ea.res(m, &j_set))?;
                ea.elements.iter().map(|&g| Ok(ea.act(&ind, g)?.trace())).collect()
            };
            let table = term_table(rep)?;
            for (pos, &g) in ea.elements.iter().enumerate() {
                let cell = lhs.get_mut(&g).unwrap();
                *cell = &*cell + &table[pos] * &sign;
            }
            // The summand's traces do not depend on which good
            // representative of the double coset is used; re-derive from an
            // alternative one when the coset offers it.
            let wi = w.parabolic(&i_set);
            let mut alt = None;
            'search: for &a in &wi.ids {
                let aw_ = w.mul(a, rep);
                for &b in &rd.w_lambda.ids {
                    let g2 = w.mul(aw_, b);
                    if g2 != rep && good(g2) {
                        alt = Some(g2);
                        break 'search;
                    }
                }
            }
            if let Some(g2) = alt {
                let table2 = term_table(g2)?;
                indep_records.push((
                    format!(
                        "summand at {{{}}} is representative-independent ({} vs {})",
                        set_label(&i_set),
                        word_label(w, rep),
                        word_label(w, g2)
                    ),
                    format!("{:?}", table.iter().map(|t| t.to_string()).collect::<Vec<_>>()),
                    format!("{:?}", table2.iter().map(|t| t.to_string()).collect::<Vec<_>>()),
                    table == table2,
                ));
            }
        }
    }

    let star = ea.twist_star(m)?;
    let i0_sign = int(if rd.i0.len() % 2 == 0 { 1 } else { -1 }) * corrupt.rat();
    let mut report = VerificationReport::new(
        "hl-analogue",
        format!(
            "{} I0={{{}}} |R|={} p=[{}] module dim {}",
            d.cartan_type,
            set_label(&rd.i0),
            ea.order(),
            ea.p_gen.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","),
            m.dim
        ),
    );
    for &g in &ea.elements {
        let rhs = ea.act(&star, g)?.trace() * &i0_sign;
        let l = &lhs[&g];
        report.record(word_label(w, g), l.to_string(), rhs.to_string(), *l == rhs);
    }
    for (witness, a, b, ok) in indep_records {
        report.record(witness, a, b, ok);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::ParamSpec;
    use crate::hecke::HeckeAlgebra;
    use crate::root_datum::{build_root_datum, Family, LatticeKind, ParamAssignment};
    use crate::weyl::irreducible_characters;
    use std::sync::Arc;

    fn weyl(family: Family, rank: usize) -> WeylGroup {
        let datum = build_root_datum(family, rank, LatticeKind::Root).unwrap();
        WeylGroup::new(&datum)
    }

    fn algebra(
        family: Family,
        rank: usize,
        lattice: LatticeKind,
        q: &[i64],
    ) -> (Arc<HeckeAlgebra>, ParamSpec) {
        let datum = build_root_datum(family, rank, lattice).unwrap();
        let assignment = ParamAssignment::equal_parameters(&datum);
        let alg = Arc::new(HeckeAlgebra::new(&datum, &assignment).unwrap());
        let qs: Vec<BigRational> = q.iter().map(|&n| int(n)).collect();
        let spec = alg.params.spec_from_values(&qs).unwrap();
        (alg, spec)
    }

    #[test]
    fn alternating_parabolic_induction_recovers_the_sign_twist() {
        // Rank one: the regular character minus the trivial one is the sign
        // character.
        let w = weyl(Family::A, 1);
        let full = w.full_subgroup();
        let triv = ClassFunction::trivial(&w, &full);
        let rep = solomon_check(&w, &triv, Corruption::None).unwrap();
        assert!(rep.pass, "{}", rep.render_text());
        assert_eq!(rep.records.len(), 2);

        // The zero class function passes vacuously.
        let zero = triv.sub(&triv);
        assert!(solomon_check(&w, &zero, Corruption::None).unwrap().pass);

        // Every irreducible character of the order-8 dihedral group.
        let w = weyl(Family::B, 2);
        let irr = irreducible_characters(&w);
        assert_eq!(irr.len(), 5);
        for chi in &irr {
            let rep = solomon_check(&w, chi, Corruption::None).unwrap();
            assert!(rep.pass, "degree {}\n{}", chi.degree(), rep.render_text());
        }

        // The corrupted dual side must fail on a nonzero character.
        let bad = solomon_check(&w, &irr[0], Corruption::FlipDualSign).unwrap();
        assert!(!bad.pass);
        assert!(bad.first_failure().is_some());
    }

    #[test]
    fn relative_duality_reduces_to_the_absolute_case_and_holds_on_a3() {
        // I0 = ∅ with H = W is the plain alternating sum.
        let w = weyl(Family::A, 2);
        let full = w.full_subgroup();
        for chi in irreducible_characters(&w) {
            let rel = hl_character_check(&w, &[], &full, &chi, Corruption::None).unwrap();
            let abs = solomon_check(&w, &chi, Corruption::None).unwrap();
            assert!(rel.pass && abs.pass);
            assert_eq!(
                rel.records.iter().map(|r| &r.lhs).collect::<Vec<_>>(),
                abs.records.iter().map(|r| &r.lhs).collect::<Vec<_>>()
            );
        }

        // A3 with the outer pair fixed: the set-stabilizer has order two and
        // both of its linear characters satisfy the identity, as does the
        // trivial subgroup.
        let w = weyl(Family::A, 3);
        let i0 = [0usize, 2];
        let h = w.stabilizer_s_i0(&i0);
        assert_eq!(h.order(), 2);
        // The nontrivial element of the stabilizer is even, so the genuine
        // second linear character must be built by hand.
        let nontrivial =
            ClassFunction::from_fn(&w, &h, |g| int(if g == w.identity() { 1 } else { -1 }));
        for chi in [ClassFunction::trivial(&w, &h), nontrivial] {
            let rep = hl_character_check(&w, &i0, &h, &chi, Corruption::None).unwrap();
            assert!(rep.pass, "{}", rep.render_text());
            assert_eq!(rep.records.len(), 2);
        }
        let trivial_sub = Subgroup::from_ids(&w, &[w.identity()]);
        let chi = ClassFunction::trivial(&w, &trivial_sub);
        let rep = hl_character_check(&w, &i0, &trivial_sub, &chi, Corruption::None).unwrap();
        assert!(rep.pass, "{}", rep.render_text());

        // An element outside the normalizer is rejected.
        let err = hl_character_check(&w, &i0, &full, &ClassFunction::trivial(&w, &full), Corruption::None)
            .unwrap_err();
        assert_eq!(err, Error::NotInNormalizer);

        // Corruption flips the dual side.
        let bad = hl_character_check(
            &w,
            &i0,
            &h,
            &ClassFunction::trivial(&w, &h),
            Corruption::FlipDualSign,
        )
        .unwrap();
        assert!(!bad.pass);
    }

    #[test]
    fn involution_theorem_on_finite_and_affine_modules() {
        // Finite rank one, trivial module: D[M] = [M ⊗ sgn-twist] on the
        // complete two-element basis.
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root, &[4]);
        let triv = HeckeModule::finite_trivial(&alg, &spec, &[0]).unwrap();
        let rep = kato_check(&triv, 0, Corruption::None).unwrap();
        assert!(rep.pass, "{}", rep.render_text());
        assert!(rep.instance.contains("complete"));
        assert_eq!(rep.records.len(), 2);

        // B2 with unequal parameters: all four one-dimensional modules.
        let (alg, spec) = algebra(Family::B, 2, LatticeKind::Root, &[4, 9]);
        let q0 = alg.params.q_of_gen(0).specialize(&spec);
        let q1 = alg.params.q_of_gen(1).specialize(&spec);
        for v0 in [q0.clone(), -BigRational::one()] {
            for v1 in [q1.clone(), -BigRational::one()] {
                let values: BTreeMap<usize, BigRational> =
                    [(0, v0.clone()), (1, v1.clone())].into_iter().collect();
                let m = HeckeModule::finite_one_dim(&alg, &spec, &[0, 1], &values).unwrap();
                let rep = kato_check(&m, 0, Corruption::None).unwrap();
                assert!(rep.pass, "values ({v0}, {v1})\n{}", rep.render_text());
                assert_eq!(rep.records.len(), 8);
            }
        }

        // An induced test module beyond dimension one.
        let sub_triv = HeckeModule::finite_trivial(&alg, &spec, &[0]).unwrap();
        let ind = sub_triv.ind_to(&[0, 1]).unwrap();
        assert_eq!(ind.dim(), 4);
        assert!(kato_check(&ind, 0, Corruption::None).unwrap().pass);

        // Affine rank one at a generic point, truncated at length 4.
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root, &[4]);
        let ps = HeckeModule::theta_character(&alg, &spec, &[int(5)])
            .unwrap()
            .ind_full()
            .unwrap();
        let rep = kato_check(&ps, 4, Corruption::None).unwrap();
        assert!(rep.pass, "{}", rep.render_text());
        assert!(rep.instance.contains("ℓ(w) ≤ 4"));

        // The corrupted dual fails immediately (the identity trace is 2 on
        // one side and −2 on the other).
        let bad = kato_check(&ps, 2, Corruption::FlipDualSign).unwrap();
        assert!(!bad.pass);
    }

    #[test]
    fn intertwiner_conjugates_generators_to_their_duals() {
        // Rank one, 4×4 matrices.
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root, &[4]);
        let ps = HeckeModule::theta_character(&alg, &spec, &[int(5)])
            .unwrap()
            .ind_full()
            .unwrap();
        let rep = chi_intertwiner_check(&ps, Corruption::None).unwrap();
        assert!(rep.pass, "{}", rep.render_text());

        // The weight lattice adds a nontrivial length-zero element.
        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Weight, &[4]);
        let ps = HeckeModule::theta_character(&alg, &spec, &[int(5)])
            .unwrap()
            .ind_full()
            .unwrap();
        let rep = chi_intertwiner_check(&ps, Corruption::None).unwrap();
        assert!(rep.pass, "{}", rep.render_text());
        assert!(
            rep.records.iter().any(|r| r.witness.contains("γ") && r.witness.contains("t(")),
            "a nontrivial length-zero generator must be exercised"
        );

        // Rank two, 36×36 matrices.
        let (alg, spec) = algebra(Family::A, 2, LatticeKind::Root, &[4]);
        let ps = HeckeModule::theta_character(&alg, &spec, &[int(5), int(7)])
            .unwrap()
            .ind_full()
            .unwrap();
        let rep = chi_intertwiner_check(&ps, Corruption::None).unwrap();
        assert!(rep.pass, "{}", rep.render_text());

        let (alg, spec) = algebra(Family::A, 1, LatticeKind::Root, &[4]);
        let ps = HeckeModule::theta_character(&alg, &spec, &[int(5)])
            .unwrap()
            .ind_full()
            .unwrap();
        let bad = chi_intertwiner_check(&ps, Corruption::FlipDualSign).unwrap();
        assert!(!bad.pass);
    }

    #[test]
    fn ramification_data_project_to_rank_one_systems() {
        // A3 with the outer pair as base: two admitted roots sharing one
        // reflection, a single projected direction, R(Λ) of order two.
        let w = weyl(Family::A, 3);
        let rd = build_ramification(
            &w,
            &[0, 2],
            RamificationMode::FullStabilizer,
            &[int(9)],
            true,
        )
        .unwrap();
        assert_eq!(rd.gamma.len(), 2);
        assert_eq!(rd.delta.len(), 1);
        let a = rd.delta[0];
        assert_eq!(w.datum.roots[a].root_coeffs, vec![0, 1, 0], "Δ(Λ) = {{α₂}}");
        assert_eq!(rd.r_group.order(), 2);
        assert_eq!(rd.w_lambda.order(), 2);
        assert!(rd.c_trivial);
        let v = rd.v_of[&a];
        assert_eq!(rd.ell_perp(v), 1);
        assert_eq!(w.det_on_perp(v, &rd.i0).unwrap(), -1);
        // Both members of Γ carry the propagated parameter.
        assert!(rd.gamma.iter().all(|g| rd.p[g] == int(9)));
        // One admitted root is negative: the simple-system condition is not
        // symmetric under negation.
        assert_eq!(rd.gamma_plus(&w).len(), 1);

        // Each B2 singleton gives the same shape.
        let w = weyl(Family::B, 2);
        for node in [0usize, 1] {
            let rd = build_ramification(
                &w,
                &[node],
                RamificationMode::FullStabilizer,
                &[int(4)],
                true,
            )
            .unwrap();
            assert_eq!(rd.r_group.order(), 2, "base node {node}");
            assert_eq!(rd.delta.len(), 1);
            assert!(rd.c_trivial);
        }

        // Degenerate: every root admitted, the simple set is Δ, and the
        // reflection group is all of W.
        let w = weyl(Family::A, 2);
        let rd = build_ramification(
            &w,
            &[],
            RamificationMode::Degenerate,
            &[int(4), int(4)],
            true,
        )
        .unwrap();
        assert_eq!(rd.gamma.len(), w.datum.roots.len());
        assert_eq!(rd.delta.len(), 2);
        assert_eq!(rd.r_group.order(), w.n);
        for g in &rd.r_group.ids {
            assert_eq!(rd.ell_perp(*g), w.length(*g), "degenerate length is ambient length");
        }

        // A-type roots form a single orbit, so unequal parameters are
        // inconsistent there.
        let err = build_ramification(
            &w,
            &[],
            RamificationMode::Degenerate,
            &[int(4), int(9)],
            true,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InconsistentParameters(_)));
    }

    #[test]
    fn endomorphism_algebra_duality_degenerate_and_ramified() {
        // Degenerate B2 with unequal parameters: the algebra is the plain
        // finite Hecke algebra and the identity reduces to the involution
        // theorem, independently recomputed through the E-machinery.
        let w = weyl(Family::B, 2);
        let rd = build_ramification(
            &w,
            &[],
            RamificationMode::Degenerate,
            &[int(4), int(9)],
            true,
        )
        .unwrap();
        let ea = EAlgebra::new(&w, rd).unwrap();
        assert_eq!(ea.order(), 8);
        let mods = ea.one_dim_modules().unwrap();
        assert_eq!(mods.len(), 4, "even bond order keeps the two nodes independent");
        for m in &mods {
            let rep = hl_analogue_check(&w, &ea, m, Corruption::None).unwrap();
            assert!(rep.pass, "{}", rep.render_text());
        }

        // A 2-dimensional induced module through the same identity.
        let sub = ea.res(&mods[3], &[0]);
        let ind = ea.ind(&w, &sub).unwrap();
        assert_eq!(ind.dim, 4);
        let rep = hl_analogue_check(&w, &ea, &ind, Corruption::None).unwrap();
        assert!(rep.pass, "{}", rep.render_text());

        // The ramified A3 datum: |I0| is even, R(Λ) has order two, and both
        // one-dimensional modules of the rank-one algebra at p = 9 pass on
        // the full two-element basis.
        let w = weyl(Family::A, 3);
        let rd = build_ramification(
            &w,
            &[0, 2],
            RamificationMode::FullStabilizer,
            &[int(9)],
            true,
        )
        .unwrap();
        let ea = EAlgebra::new(&w, rd).unwrap();
        let mods = ea.one_dim_modules().unwrap();
        assert_eq!(mods.len(), 2);
        for m in &mods {
            let rep = hl_analogue_check(&w, &ea, m, Corruption::None).unwrap();
            assert!(rep.pass, "{}", rep.render_text());
            assert!(rep.records.len() >= 2);
        }

        // Corruption must break it.
        let bad = hl_analogue_check(&w, &ea, &mods[0], Corruption::FlipDualSign).unwrap();
        assert!(!bad.pass);
    }
}
