//! The finite Weyl group as an explicit group of lattice automorphisms:
//! lengths, reduced words, parabolic subgroups, coset and double-coset
//! representatives, the stabilizer sets C_{I0}(I) and S_{I0}, determinants on
//! orthogonal complements, and exact class-function arithmetic with induction
//! and restriction.
//!
//! Elements are stored by their action on X (an integer matrix), which makes
//! equality canonical and the length function an inversion count:
//! ℓ(w) = #{α ∈ R⁺ : w(α) ∈ −R⁺}.  Reduced words are recovered by the descent
//! algorithm and normalized to the lexicographically smallest one, so every
//! enumeration in the crate is deterministic.  All groups in scope have at
//! most 384 elements, so subgroups are explicit element sets and a full
//! multiplication table is kept.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coefficients::int;
use crate::error::{Error, Result};
use crate::linalg::{imat_inverse, IMat, QMat};
use crate::root_datum::RootDatum;

/// One element of W, viewed through its action on X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub mat: IMat,
    pub length: usize,
}

/// The whole group, fully enumerated, with multiplication and inverse tables
/// and the root permutation of every element.
pub struct WeylGroup {
    pub datum: RootDatum,
    /// Group order.
    pub n: usize,
    mats: Vec<IMat>,
    index: BTreeMap<IMat, usize>,
    lengths: Vec<usize>,
    words: Vec<Vec<usize>>,
    /// root_perm[w][r] = index of w(β_r) in the root list.
    root_perm: Vec<Vec<u16>>,
    mul_table: Vec<u32>,
    inv_table: Vec<usize>,
}

impl WeylGroup {
    pub fn new(datum: &RootDatum) -> Self {
        let rank = datum.rank;
        let gens: Vec<IMat> =
            (0..rank).map(|i| datum.reflection_matrix(datum.simple_root_index(i))).collect();

        // Level-order closure: BFS level = word length = inversion count.
        let id = IMat::identity(rank);
        let mut mats = vec![id.clone()];
        let mut index: BTreeMap<IMat, usize> = BTreeMap::new();
        index.insert(id, 0);
        let mut level_of = vec![0usize];
        let mut head = 0;
        while head < mats.len() {
            let current = mats[head].clone();
            let level = level_of[head];
            head += 1;
            for g in &gens {
                let next = g.mul(&current);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), mats.len());
                    level_of.push(level + 1);
                    mats.push(next);
                }
            }
        }
        let n = mats.len();
        assert_eq!(n, datum.cartan_type.weyl_order(), "group order must match the type");

        // Root permutations and inversion-count lengths.
        let n_roots = datum.roots.len();
        let root_perm: Vec<Vec<u16>> = mats
            .iter()
            .map(|m| {
                (0..n_roots)
                    .map(|r| {
                        let img = m.apply(&datum.roots[r].vec);
                        datum.index_of_root(&img).expect("W permutes R") as u16
                    })
                    .collect()
            })
            .collect();
        let lengths: Vec<usize> = root_perm
            .iter()
            .map(|p| {
                (0..datum.n_positive)
                    .filter(|&r| p[r] as usize >= datum.n_positive)
                    .count()
            })
            .collect();
        for i in 0..n {
            assert_eq!(lengths[i], level_of[i], "BFS level must equal inversion count");
        }

        // Lexicographically smallest reduced words, by smallest left descent.
        // ℓ(s_i w) < ℓ(w) iff w^{-1}(α_i) < 0, i.e. α_i is an inversion of
        // w^{-1}; equivalently s_i w sits one BFS level lower.
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut by_level: Vec<Vec<usize>> = Vec::new();
        for (i, &l) in lengths.iter().enumerate() {
            if by_level.len() <= l {
                by_level.resize(l + 1, Vec::new());
            }
            by_level[l].push(i);
        }
        for level in 1..by_level.len() {
            for &w in &by_level[level] {
                let mut found: Option<(usize, usize)> = None;
                for (i, g) in gens.iter().enumerate() {
                    let u = index[&g.mul(&mats[w])];
                    if lengths[u] == level - 1 {
                        found = Some((i, u));
                        break;
                    }
                }
                let (i, u) = found.expect("every nonidentity element has a left descent");
                let mut word = Vec::with_capacity(level);
                word.push(i);
                word.extend_from_slice(&words[u]);
                words[w] = word;
            }
        }

        // Canonical ids: sort by (length, word).
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| (lengths[a], &words[a]).cmp(&(lengths[b], &words[b])));
        let mats: Vec<IMat> = order.iter().map(|&o| mats[o].clone()).collect();
        let lengths: Vec<usize> = order.iter().map(|&o| lengths[o]).collect();
        let words: Vec<Vec<usize>> = order.iter().map(|&o| words[o].clone()).collect();
        let root_perm: Vec<Vec<u16>> = order.iter().map(|&o| root_perm[o].clone()).collect();
        let index: BTreeMap<IMat, usize> =
            mats.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();

        let mut mul_table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul_table[a * n + b] = index[&mats[a].mul(&mats[b])] as u32;
            }
        }
        let inv_table: Vec<usize> = (0..n).map(|a| index[&imat_inverse(&mats[a])]).collect();

        WeylGroup { datum: datum.clone(), n, mats, index, lengths, words, root_perm, mul_table, inv_table }
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn simple(&self, i: usize) -> usize {
        self.index[&self.datum.reflection_matrix(self.datum.simple_root_index(i))]
    }

    /// Reflection s_β for an arbitrary root index.
    pub fn reflection(&self, root_idx: usize) -> usize {
        self.index[&self.datum.reflection_matrix(root_idx)]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.n + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv_table[a]
    }

    /// x g x^{-1}.
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn length(&self, a: usize) -> usize {
        self.lengths[a]
    }

    pub fn sign(&self, a: usize) -> i64 {
        if self.lengths[a] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The lexicographically smallest reduced word.
    pub fn word(&self, a: usize) -> &[usize] {
        &self.words[a]
    }

    pub fn mat(&self, a: usize) -> &IMat {
        &self.mats[a]
    }

    pub fn element(&self, a: usize) -> WeylElement {
        WeylElement { mat: self.mats[a].clone(), length: self.lengths[a] }
    }

    pub fn id_of_mat(&self, m: &IMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn eval_word(&self, word: &[usize]) -> usize {
        word.iter().fold(self.identity(), |acc, &i| self.mul(acc, self.simple(i)))
    }

    /// Image of the root with index `r` under w.
    pub fn root_image(&self, w: usize, r: usize) -> usize {
        self.root_perm[w][r] as usize
    }

    pub fn act_on_x(&self, w: usize, x: &[i64]) -> Vec<i64> {
        self.mats[w].apply(x)
    }

    /// ℓ(w s_i) < ℓ(w), i.e. w(α_i) < 0.
    pub fn right_descent(&self, w: usize, i: usize) -> bool {
        self.root_image(w, self.datum.simple_root_index(i)) >= self.datum.n_positive
    }

    pub fn left_descent(&self, w: usize, i: usize) -> bool {
        self.right_descent(self.inv(w), i)
    }

    /// The parabolic subgroup W_I generated by {s_i : i ∈ I}.
    pub fn parabolic(&self, i_set: &[usize]) -> Subgroup {
        let gens: Vec<usize> = i_set.iter().map(|&i| self.simple(i)).collect();
        Subgroup::from_generators(self, &gens)
    }

    pub fn full_subgroup(&self) -> Subgroup {
        let ids: Vec<usize> = (0..self.n).collect();
        Subgroup::from_ids(self, &ids)
    }

    /// The longest element of W_I (the unique maximum of the length function
    /// there); for I = S this is w0.
    pub fn longest_element(&self, i_set: &[usize]) -> usize {
        let sub = self.parabolic(i_set);
        let mut best = self.identity();
        for &g in &sub.ids {
            if self.lengths[g] > self.lengths[best] {
                best = g;
            }
        }
        debug_assert_eq!(
            sub.ids.iter().filter(|&&g| self.lengths[g] == self.lengths[best]).count(),
            1,
            "the longest element of a parabolic is unique"
        );
        best
    }

    /// Minimal-length representatives of the left cosets wW_I, in id order
    /// (which sorts by length, ties broken by word).
    pub fn minimal_coset_reps(&self, i_set: &[usize]) -> Vec<usize> {
        let sub = self.parabolic(i_set);
        let mut visited = vec![false; self.n];
        let mut reps = Vec::new();
        for w in 0..self.n {
            if visited[w] {
                continue;
            }
            reps.push(w);
            for &u in &sub.ids {
                visited[self.mul(w, u)] = true;
            }
        }
        reps
    }

    /// C_{I0}(I) = {w ∈ W : w(α_a) ∈ span_Z{α_i : i ∈ I} for every a ∈ I0}.
    /// Images are roots, so the span condition says each w(α_a) is a root of
    /// the parabolic subsystem R_I, i.e. the reflection s_{w(α_a)} lies in
    /// W_I.
    pub fn c_set(&self, i0: &[usize], i_set: &[usize]) -> Vec<usize> {
        let in_i = {
            let mut v = vec![false; self.datum.rank];
            for &i in i_set {
                v[i] = true;
            }
            v
        };
        let simple_ids: Vec<usize> =
            i0.iter().map(|&a| self.datum.simple_root_index(a)).collect();
        (0..self.n)
            .filter(|&w| {
                simple_ids.iter().all(|&r| {
                    let img = self.root_image(w, r);
                    self.datum.roots[img]
                        .root_coeffs
                        .iter()
                        .enumerate()
                        .all(|(k, &c)| c == 0 || in_i[k])
                })
            })
            .collect()
    }

    /// S_{I0} = {w ∈ W : w I0 = I0}, the set-stabilizer of the simple roots
    /// indexed by I0; it normalizes W_{I0}.
    pub fn stabilizer_s_i0(&self, i0: &[usize]) -> Subgroup {
        let simple_ids: Vec<usize> =
            i0.iter().map(|&a| self.datum.simple_root_index(a)).collect();
        let ids: Vec<usize> = (0..self.n)
            .filter(|&w| {
                simple_ids.iter().all(|&r| simple_ids.contains(&self.root_image(w, r)))
            })
            .collect();
        Subgroup::from_ids(self, &ids)
    }

    /// Rational basis of I0⊥ = {x : B(x, α_a) = 0 ∀ a ∈ I0} for the
    /// W-invariant form B, as columns.
    pub fn perp_basis(&self, i0: &[usize]) -> QMat {
        let nr = self.datum.rank;
        let b = self.datum.invariant_form();
        let mut m = QMat::zeros(i0.len(), nr);
        for (row, &a) in i0.iter().enumerate() {
            for col in 0..nr {
                let mut acc = BigRational::zero();
                for k in 0..nr {
                    acc += &b[(col, k)] * int(self.datum.simple_roots[a][k]);
                }
                m[(row, col)] = acc;
            }
        }
        m.kernel_basis()
    }

    /// det of w restricted to I0⊥; requires w to stabilize I0⊥.
    pub fn det_on_perp(&self, w: usize, i0: &[usize]) -> Result<i64> {
        let k = self.perp_basis(i0);
        if k.cols == 0 {
            return Ok(1);
        }
        let wk = self.mats[w].to_qmat().mul(&k);
        let t = k.solve(&wk).ok_or(Error::NotInNormalizer)?;
        let det = t.determinant();
        if det == BigRational::one() {
            Ok(1)
        } else if det == -BigRational::one() {
            Ok(-1)
        } else {
            Err(Error::NotInNormalizer)
        }
    }

    /// One representative per double coset W_I w H inside C; minimal length
    /// with lexicographic tie-break, or a preferred element when `prefer`
    /// accepts one.  C must be a union of double cosets.
    pub fn double_coset_reps(
        &self,
        i_set: &[usize],
        h: &Subgroup,
        c: &[usize],
        prefer: Option<&dyn Fn(usize) -> bool>,
    ) -> Result<Vec<usize>> {
        let wi = self.parabolic(i_set);
        let mut in_c = vec![false; self.n];
        for &w in c {
            in_c[w] = true;
        }
        let mut visited = vec![false; self.n];
        let mut reps = Vec::new();
        for &start in c {
            if visited[start] {
                continue;
            }
            // Enumerate the double coset W_I start H.
            let mut orbit = Vec::new();
            for &a in &wi.ids {
                let aw = self.mul(a, start);
                for &b in &h.ids {
                    let g = self.mul(aw, b);
                    if !in_c[g] {
                        return Err(Error::NotSaturated);
                    }
                    if !visited[g] {
                        visited[g] = true;
                        orbit.push(g);
                    }
                }
            }
            orbit.sort_unstable();
            let rep = prefer
                .and_then(|p| orbit.iter().copied().find(|&g| p(g)))
                .unwrap_or(orbit[0]);
            reps.push(rep);
        }
        reps.sort_unstable();
        Ok(reps)
    }
}

/// An explicit subgroup: a sorted id list plus a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub ids: Vec<usize>,
    member: Vec<bool>,
}

impl Subgroup {
    pub fn from_ids(w: &WeylGroup, ids: &[usize]) -> Self {
        let mut ids: Vec<usize> = ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut member = vec![false; w.n];
        for &i in &ids {
            member[i] = true;
        }
        // Closure sanity: a subgroup must contain products and inverses.
        debug_assert!(ids.iter().all(|&a| member[w.inv(a)]));
        Subgroup { ids, member }
    }

    pub fn from_generators(w: &WeylGroup, gens: &[usize]) -> Self {
        let mut member = vec![false; w.n];
        member[w.identity()] = true;
        let mut stack = vec![w.identity()];
        while let Some(g) = stack.pop() {
            for &s in gens {
                let next = w.mul(g, s);
                if !member[next] {
                    member[next] = true;
                    stack.push(next);
                }
            }
        }
        let ids: Vec<usize> = (0..w.n).filter(|&i| member[i]).collect();
        Subgroup { ids, member }
    }

    pub fn order(&self) -> usize {
        self.ids.len()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.member[id]
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ids.iter().all(|&i| other.contains(i))
    }

    /// w^{-1} H w.
    pub fn conjugated(&self, w: &WeylGroup, x: usize) -> Subgroup {
        let xi = w.inv(x);
        let ids: Vec<usize> = self.ids.iter().map(|&g| w.mul(w.mul(xi, g), x)).collect();
        Subgroup::from_ids(w, &ids)
    }

    pub fn intersect(&self, w: &WeylGroup, other: &Subgroup) -> Subgroup {
        let ids: Vec<usize> =
            self.ids.iter().copied().filter(|&i| other.contains(i)).collect();
        Subgroup::from_ids(w, &ids)
    }

    /// Conjugacy classes of this subgroup (orbits of conjugation by its own
    /// elements), each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self, w: &WeylGroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; w.n];
        let mut classes = Vec::new();
        for &g in &self.ids {
            if seen[g] {
                continue;
            }
            let mut class = Vec::new();
            let mut stack = vec![g];
            seen[g] = true;
            while let Some(h) = stack.pop() {
                class.push(h);
                for &x in &self.ids {
                    let c = w.conjugate(h, x);
                    if !seen[c] {
                        seen[c] = true;
                        stack.push(c);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes.sort_by_key(|c| c[0]);
        classes
    }
}

/// An exact class function on an explicit subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    pub group: Subgroup,
    pub classes: Vec<Vec<usize>>,
    /// class index of every member element (indexed by group position).
    class_of: BTreeMap<usize, usize>,
    pub values: Vec<BigRational>,
}

impl ClassFunction {
    pub fn from_fn(w: &WeylGroup, group: &Subgroup, f: impl Fn(usize) -> BigRational) -> Self {
        let classes = group.conjugacy_classes(w);
        let mut class_of = BTreeMap::new();
        for (ci, class) in classes.iter().enumerate() {
            for &g in class {
                class_of.insert(g, ci);
            }
        }
        let values: Vec<BigRational> = classes.iter().map(|c| f(c[0])).collect();
        // The defining map must be constant on classes.
        for (ci, class) in classes.iter().enumerate() {
            for &g in class {
                debug_assert_eq!(f(g), values[ci], "class function must be constant on classes");
            }
        }
        ClassFunction { group: group.clone(), classes, class_of, values }
    }

    pub fn trivial(w: &WeylGroup, group: &Subgroup) -> Self {
        Self::from_fn(w, group, |_| BigRational::one())
    }

    /// Restriction of sgn(w) = (−1)^{ℓ(w)}.
    pub fn sign(w: &WeylGroup, group: &Subgroup) -> Self {
        Self::from_fn(w, group, |g| int(w.sign(g)))
    }

    /// Character of the action of W on X ⊗ Q (the reflection representation).
    pub fn reflection(w: &WeylGroup, group: &Subgroup) -> Self {
        Self::from_fn(w, group, |g| {
            let m = w.mat(g);
            int((0..m.n).map(|i| m.get(i, i)).sum())
        })
    }

    pub fn value(&self, g: usize) -> &BigRational {
        &self.values[self.class_of[&g]]
    }

    pub fn degree(&self) -> &BigRational {
        self.value(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group);
        let mut out = self.clone();
        for (i, v) in out.values.iter_mut().enumerate() {
            *v = &*v + &other.values[i];
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group);
        let mut out = self.clone();
        for (i, v) in out.values.iter_mut().enumerate() {
            *v = &*v - &other.values[i];
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v = -&*v;
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v = &*v * c;
        }
        out
    }

    /// Pointwise product (the character of a tensor product).
    pub fn pointwise_mul(&self, other: &Self) -> Self {
        assert_eq!(self.group, other.group);
        let mut out = self.clone();
        for (i, v) in out.values.iter_mut().enumerate() {
            *v = &*v * &other.values[i];
        }
        out
    }

    /// Twist by w ↦ det(w)·χ(w) with det evaluated on the full space, i.e.
    /// multiply by the sign character.
    pub fn sign_twist(&self, w: &WeylGroup) -> Self {
        let mut out = self.clone();
        for (ci, class) in out.classes.iter().enumerate() {
            out.values[ci] = &self.values[ci] * int(w.sign(class[0]));
        }
        out
    }

    /// ⟨φ, ψ⟩ = |G|^{-1} Σ_{g∈G} φ(g) ψ(g^{-1}).
    pub fn inner(&self, w: &WeylGroup, other: &Self) -> BigRational {
        assert_eq!(self.group, other.group);
        let mut acc = BigRational::zero();
        for &g in &self.group.ids {
            acc += self.value(g) * other.value(w.inv(g));
        }
        acc / int(self.group.order() as i64)
    }

    /// (Ind_K^G φ)(g) = |K|^{-1} Σ_{x ∈ G, x g x^{-1} ∈ K} φ(x g x^{-1}).
    pub fn induce(&self, w: &WeylGroup, to: &Subgroup) -> Result<ClassFunction> {
        if !self.group.is_subgroup_of(to) {
            return Err(Error::NotASubgroup);
        }
        let k_order = int(self.group.order() as i64);
        let g_classes = to.conjugacy_classes(w);
        let mut values = Vec::with_capacity(g_classes.len());
        for class in &g_classes {
            let g = class[0];
            let mut acc = BigRational::zero();
            for &x in &to.ids {
                let c = w.conjugate(g, x);
                if self.group.contains(c) {
                    acc += self.value(c);
                }
            }
            values.push(acc / &k_order);
        }
        let mut class_of = BTreeMap::new();
        for (ci, class) in g_classes.iter().enumerate() {
            for &g in class {
                class_of.insert(g, ci);
            }
        }
        Ok(ClassFunction { group: to.clone(), classes: g_classes, class_of, values })
    }

    /// Pointwise restriction to a subgroup.
    pub fn restrict(&self, w: &WeylGroup, to: &Subgroup) -> Result<ClassFunction> {
        if !to.is_subgroup_of(&self.group) {
            return Err(Error::NotASubgroup);
        }
        Ok(ClassFunction::from_fn(w, to, |g| self.value(g).clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// All subsets of {0, …, n−1}, in ascending bitmask order.
pub fn subsets_of(n: usize) -> Vec<Vec<usize>> {
    (0..(1u32 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect()
}

/// All linear characters of a subgroup of W generated by reflections of
/// simple roots in `gens`: sign assignments constant along odd bonds.
fn linear_characters_of_parabolic(
    w: &WeylGroup,
    i_set: &[usize],
    sub: &Subgroup,
) -> Vec<ClassFunction> {
    // Components of I under odd bonds; each component picks ±1 freely.
    let k = i_set.len();
    let mut comp: Vec<usize> = (0..k).collect();
    fn find(comp: &mut Vec<usize>, mut a: usize) -> usize {
        while comp[a] != a {
            comp[a] = comp[comp[a]];
            a = comp[a];
        }
        a
    }
    for a in 0..k {
        for b in (a + 1)..k {
            if w.datum.m_finite(i_set[a], i_set[b]) % 2 == 1 {
                let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
                if ra != rb {
                    comp[ra] = rb;
                }
            }
        }
    }
    let roots: Vec<usize> = {
        let mut seen = Vec::new();
        for a in 0..k {
            let r = find(&mut comp, a);
            if !seen.contains(&r) {
                seen.push(r);
            }
        }
        seen
    };
    let mut out = Vec::new();
    for mask in 0..(1u32 << roots.len()) {
        let mut eps = vec![1i64; w.datum.rank];
        for (bit, &r) in roots.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                for a in 0..k {
                    if find(&mut comp.clone(), a) == r {
                        eps[i_set[a]] = -1;
                    }
                }
            }
        }
        out.push(ClassFunction::from_fn(w, sub, |g| {
            int(w.word(g).iter().map(|&s| eps[s]).product::<i64>())
        }));
    }
    out
}

/// The full set of irreducible characters of W, constructed from linear
/// characters, the reflection character, parabolic inductions, and tensor
/// products, sieved by exact inner products.  The result is certified:
/// orthonormal, one per conjugacy class, positive degrees, and
/// Σ χ(e)² = |W|.
pub fn irreducible_characters(w: &WeylGroup) -> Vec<ClassFunction> {
    let full = w.full_subgroup();
    let target = full.conjugacy_classes(w).len();
    let s: Vec<usize> = (0..w.datum.rank).collect();

    let mut candidates: Vec<ClassFunction> = Vec::new();
    candidates.extend(linear_characters_of_parabolic(w, &s, &full));
    candidates.push(ClassFunction::reflection(w, &full));
    for i_set in subsets_of(w.datum.rank) {
        let sub = w.parabolic(&i_set);
        for lin in linear_characters_of_parabolic(w, &i_set, &sub) {
            candidates.push(lin.induce(w, &full).unwrap());
        }
    }

    let mut irreducibles: Vec<ClassFunction> = Vec::new();
    let mut round = 0;
    while irreducibles.len() < target {
        round += 1;
        assert!(round <= 8, "character sieve failed to converge");
        let mut next_candidates: Vec<ClassFunction> = Vec::new();
        for cand in &candidates {
            let mut rem = cand.clone();
            for irr in &irreducibles {
                let m = rem.inner(w, irr);
                if !m.is_zero() {
                    rem = rem.sub(&irr.scale(&m));
                }
            }
            if rem.is_zero() {
                continue;
            }
            let norm = rem.inner(w, &rem);
            if norm == BigRational::one() && rem.degree().is_positive() {
                // A new irreducible; re-orthogonalize nothing, just record.
                irreducibles.push(rem);
                if irreducibles.len() == target {
                    break;
                }
            } else {
                next_candidates.push(rem);
            }
        }
        if irreducibles.len() >= target {
            break;
        }
        // Enrich the pool with tensor products against what we have.
        let refl = ClassFunction::reflection(w, &full);
        let mut enriched = next_candidates.clone();
        for irr in &irreducibles {
            enriched.push(irr.pointwise_mul(&refl));
            for irr2 in &irreducibles {
                enriched.push(irr.pointwise_mul(irr2));
            }
        }
        candidates = enriched;
    }

    // Certification.
    assert_eq!(irreducibles.len(), target);
    let mut degree_sq_sum = BigRational::zero();
    for (i, a) in irreducibles.iter().enumerate() {
        assert!(a.degree().is_positive());
        degree_sq_sum += a.degree() * a.degree();
        for (j, b) in irreducibles.iter().enumerate() {
            let expected = if i == j { BigRational::one() } else { BigRational::zero() };
            assert_eq!(a.inner(w, b), expected, "characters must be orthonormal");
        }
    }
    assert_eq!(degree_sq_sum, int(w.n as i64), "degrees must satisfy Σ d² = |W|");
    irreducibles.sort_by_key(|c| (c.degree().clone(), c.values.clone()));
    irreducibles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::{build_root_datum, supported_types, Family, LatticeKind};

    fn weyl(f: Family, r: usize) -> WeylGroup {
        WeylGroup::new(&build_root_datum(f, r, LatticeKind::Root).unwrap())
    }

    #[test]
    fn lengths_words_and_longest_elements() {
        let w = weyl(Family::A, 2);
        assert_eq!(w.n, 6);
        assert_eq!(w.length(w.identity()), 0);
        assert_eq!(w.word(w.identity()), &[] as &[usize]);
        for i in 0..2 {
            assert_eq!(w.length(w.simple(i)), 1);
            assert_eq!(w.word(w.simple(i)), &[i]);
        }
        let w0 = w.longest_element(&[0, 1]);
        assert_eq!(w.length(w0), 3, "longest element of A2 has length |R+| = 3");
        assert_eq!(w.longest_element(&[]), w.identity());

        // A3: longest element of the commuting pair {s1, s3}.
        let w3 = weyl(Family::A, 3);
        let l = w3.longest_element(&[0, 2]);
        assert_eq!(w3.length(l), 2);
        assert_eq!(l, w3.mul(w3.simple(0), w3.simple(2)));
    }

    #[test]
    fn word_evaluation_roundtrip_and_exchange() {
        for t in [(Family::A, 3), (Family::B, 3), (Family::G, 2)] {
            let w = weyl(t.0, t.1);
            for g in 0..w.n {
                assert_eq!(w.eval_word(w.word(g)), g, "reduced word evaluates back");
                assert_eq!(w.word(g).len(), w.length(g), "word is reduced");
                assert_eq!(w.length(g), w.length(w.inv(g)));
                for i in 0..w.datum.rank {
                    let gs = w.mul(g, w.simple(i));
                    let diff = w.length(gs) as i64 - w.length(g) as i64;
                    assert!(diff == 1 || diff == -1, "ℓ(ws) = ℓ(w) ± 1");
                }
            }
        }
    }

    #[test]
    fn sign_is_a_homomorphism() {
        let w = weyl(Family::B, 2);
        for a in 0..w.n {
            for b in 0..w.n {
                assert_eq!(w.sign(w.mul(a, b)), w.sign(a) * w.sign(b));
            }
        }
    }

    #[test]
    fn minimal_coset_representatives() {
        let w = weyl(Family::A, 2);
        let reps = w.minimal_coset_reps(&[0]);
        assert_eq!(reps.len(), 3, "6/2 left cosets");
        assert_eq!(w.minimal_coset_reps(&[0, 1]), vec![w.identity()]);
        assert_eq!(w.minimal_coset_reps(&[]).len(), 6);

        // Length additivity ℓ(xu) = ℓ(x) + ℓ(u) for all parabolic subsets of A3.
        let w3 = weyl(Family::A, 3);
        for i_set in subsets_of(3) {
            let sub = w3.parabolic(&i_set);
            for &x in &w3.minimal_coset_reps(&i_set) {
                for &u in &sub.ids {
                    assert_eq!(w3.length(w3.mul(x, u)), w3.length(x) + w3.length(u));
                }
            }
        }
    }

    #[test]
    fn c_set_membership_and_closure() {
        let w = weyl(Family::A, 3);
        // I0 = ∅ puts no condition.
        assert_eq!(w.c_set(&[], &[0]).len(), w.n);
        // |I| < |I0| leaves no room.
        assert!(w.c_set(&[0, 2], &[1]).is_empty());
        // I0 = I = {s1, s3}: permutations preserving the pair of pairs
        // {1,2}, {3,4} — eight elements.
        let c = w.c_set(&[0, 2], &[0, 2]);
        assert_eq!(c.len(), 8);
        // Closure under left W_I and right S_{I0} multiplication.
        let wi = w.parabolic(&[0, 2]);
        let st = w.stabilizer_s_i0(&[0, 2]);
        for &g in &c {
            for &a in &wi.ids {
                assert!(c.contains(&w.mul(a, g)));
            }
            for &b in &st.ids {
                assert!(c.contains(&w.mul(g, b)));
            }
        }
    }

    #[test]
    fn stabilizer_of_simple_subsets() {
        let w = weyl(Family::A, 3);
        assert_eq!(w.stabilizer_s_i0(&[]).order(), w.n);
        assert_eq!(w.stabilizer_s_i0(&[0, 1, 2]).order(), 1);
        // {s1, s3}: the swap of the two commuting A1 factors survives.
        let st = w.stabilizer_s_i0(&[0, 2]);
        assert_eq!(st.order(), 2);
        let nontrivial = st.ids.iter().find(|&&g| g != w.identity()).unwrap();
        // It exchanges α1 and α3.
        let a1 = w.datum.simple_root_index(0);
        let a3 = w.datum.simple_root_index(2);
        assert_eq!(w.root_image(*nontrivial, a1), a3);
    }

    #[test]
    fn determinant_on_perp() {
        let w = weyl(Family::A, 3);
        assert_eq!(w.det_on_perp(w.identity(), &[0, 2]).unwrap(), 1);
        // I0 = ∅: det on the whole space is the sign character.
        for g in 0..w.n {
            assert_eq!(w.det_on_perp(g, &[]).unwrap(), w.sign(g));
        }
        // The canonical reflection-like element v[a, I0] = u·t with
        // u = longest of W_{I0 ∪ {a}}, t = longest of W_{I0}: restricts to
        // I0⊥ with determinant −1.
        let u = w.longest_element(&[0, 1, 2]);
        let t = w.longest_element(&[0, 2]);
        let v = w.mul(u, t);
        assert_eq!(w.det_on_perp(v, &[0, 2]).unwrap(), -1);
        // Multiplicativity on the stabilizer.
        let st = w.stabilizer_s_i0(&[0, 2]);
        for &a in &st.ids {
            for &b in &st.ids {
                let da = w.det_on_perp(a, &[0, 2]).unwrap();
                let db = w.det_on_perp(b, &[0, 2]).unwrap();
                assert_eq!(w.det_on_perp(w.mul(a, b), &[0, 2]).unwrap(), da * db);
            }
        }
        // An element moving I0⊥ off itself is rejected.
        let s2 = w.simple(1);
        assert!(matches!(w.det_on_perp(s2, &[0, 2]), Err(Error::NotInNormalizer)));
    }

    #[test]
    fn double_coset_representatives() {
        let w = weyl(Family::A, 3);
        let full: Vec<usize> = (0..w.n).collect();
        // Whole group on both sides: a single double coset represented by e.
        let reps = w
            .double_coset_reps(&[0, 1, 2], &w.full_subgroup(), &full, None)
            .unwrap();
        assert_eq!(reps, vec![w.identity()]);
        // Trivial on both sides: everything is its own coset.
        let trivial = Subgroup::from_ids(&w, &[w.identity()]);
        let reps = w.double_coset_reps(&[], &trivial, &full, None).unwrap();
        assert_eq!(reps.len(), w.n);
        // A non-saturated input is rejected.
        let bad = vec![w.simple(0)];
        assert!(matches!(
            w.double_coset_reps(&[0], &trivial, &bad, None),
            Err(Error::NotSaturated)
        ));
        // Preference can pick a non-minimal representative.
        let st = w.stabilizer_s_i0(&[0, 2]);
        let c = w.c_set(&[0, 2], &[0, 1, 2]);
        let reps =
            w.double_coset_reps(&[0, 1, 2], &st, &c, Some(&|g: usize| w.length(g) == 2)).unwrap();
        for &r in &reps {
            // With the predicate satisfied somewhere in a coset, it is honored.
            if w.length(r) != 2 {
                // Then no element of its double coset has length 2; verify.
                let wi = w.parabolic(&[0, 1, 2]);
                for &a in &wi.ids {
                    for &b in &st.ids {
                        assert_ne!(w.length(w.mul(w.mul(a, r), b)), 2);
                    }
                }
            }
        }
    }

    #[test]
    fn induction_and_frobenius_reciprocity() {
        let w = weyl(Family::A, 1);
        let full = w.full_subgroup();
        let trivial_sub = Subgroup::from_ids(&w, &[w.identity()]);
        let reg = ClassFunction::trivial(&w, &trivial_sub).induce(&w, &full).unwrap();
        assert_eq!(reg.value(w.identity()), &int(2), "regular character at e is |W|");
        assert_eq!(reg.value(w.simple(0)), &int(0));

        let w = weyl(Family::B, 2);
        let full = w.full_subgroup();
        let sub = w.parabolic(&[0]);
        let phis = [
            ClassFunction::trivial(&w, &sub),
            ClassFunction::sign(&w, &sub),
            ClassFunction::reflection(&w, &sub),
        ];
        let psis = [
            ClassFunction::trivial(&w, &full),
            ClassFunction::sign(&w, &full),
            ClassFunction::reflection(&w, &full),
        ];
        for phi in &phis {
            for psi in &psis {
                let lhs = phi.induce(&w, &full).unwrap().inner(&w, psi);
                let rhs = phi.inner(&w, &psi.restrict(&w, &sub).unwrap());
                assert_eq!(lhs, rhs, "Frobenius reciprocity");
            }
        }
        // Restriction to the same group is the identity.
        let chi = ClassFunction::reflection(&w, &full);
        assert_eq!(chi.restrict(&w, &full).unwrap(), chi);
        // Induction from a non-subgroup errors.
        let other = w.parabolic(&[1]);
        assert!(matches!(
            ClassFunction::trivial(&w, &full).induce(&w, &other),
            Err(Error::NotASubgroup)
        ));
    }

    #[test]
    fn character_tables_for_small_types() {
        for (f, r, classes) in [
            (Family::A, 1, 2),
            (Family::A, 2, 3),
            (Family::A, 3, 5),
            (Family::B, 2, 5),
            (Family::G, 2, 6),
        ] {
            let w = weyl(f, r);
            let irr = irreducible_characters(&w);
            assert_eq!(irr.len(), classes, "{f:?}{r}");
        }
    }

    #[test]
    fn group_orders_across_catalog() {
        for t in supported_types() {
            let d = build_root_datum(t.family, t.rank, LatticeKind::Root).unwrap();
            let w = WeylGroup::new(&d);
            assert_eq!(w.n, t.weyl_order(), "{t}");
            // w0 maps R+ to −R+.
            let w0 = w.longest_element(&(0..t.rank).collect::<Vec<_>>());
            assert_eq!(w.length(w0), d.n_positive);
        }
    }
}
