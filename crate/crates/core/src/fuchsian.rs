//! Surface-group machinery: presentations, certified element enumeration,
//! finite covers via permutation representations, conjugacy classes,
//! primitive decomposition and truncated length spectra.
//!
//! Enumeration strategy: the generators are assumed to be the side
//! pairings of the Dirichlet domain centered at the origin (true for the
//! shipped genus-2 group). Every conjugacy class of translation length
//! `<= L` then has a representative whose axis meets the domain, hence
//! whose origin displacement is at most `L + 2 R0`, where `R0` is the
//! domain circumradius. A breadth-first product search expanded out to
//! displacement `L + 3 R0 + slack` finds all such elements, because the
//! domain chain along the geodesic from the origin to `g·0` yields a word
//! whose prefixes stay within `R0` of that geodesic.

use crate::hypgeom::{
    classify_element, dirichlet_circumradius, origin_displacement, translation_length,
    ElementClass,
};
use crate::numcore::{
    audit_separation_fast, mat_inv, mat_mul, DedupGrid, GroupElement, NumError,
};
use crate::scalar::Real;
use rayon::prelude::*;

/// Errors from group validation, enumeration and spectra.
#[derive(Debug, thiserror::Error)]
pub enum FuchsError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("generator {0} is not hyperbolic ({1:?})")]
    NonHyperbolicGenerator(usize, ElementClass),
    #[error("relator does not evaluate to the identity (entry distance {0:e})")]
    BadRelator(f64),
    #[error("relator uses letter {0} outside the generator alphabet")]
    BadLetter(i32),
    #[error("enumeration budget exceeded: {0} elements")]
    BudgetExceeded(usize),
    #[error("generators do not close up a compact Dirichlet domain at the origin")]
    NoCompactDomain,
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("spectrum is empty up to cutoff {0}")]
    EmptySpectrum(f64),
    #[error("ball incomplete for decomposition: required trace {required:.6}, certified {certified:.6}")]
    IncompleteBall { required: f64, certified: f64 },
}

/// Finitely presented cocompact surface group: `2g` hyperbolic generator
/// matrices and a single relator word. Letters are `1..=2g` for
/// generators and negatives for inverses.
#[derive(Debug, Clone)]
pub struct GroupPresentation<T: Real> {
    pub genus: usize,
    pub generators: Vec<GroupElement<T>>,
    pub relator: Vec<i32>,
}

impl<T: Real> GroupPresentation<T> {
    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    /// Generator or inverse for a signed letter.
    pub fn letter(&self, l: i32) -> Result<GroupElement<T>, FuchsError> {
        let k = l.unsigned_abs() as usize;
        if l == 0 || k > self.generators.len() {
            return Err(FuchsError::BadLetter(l));
        }
        let g = self.generators[k - 1].clone();
        Ok(if l > 0 { g } else { mat_inv(&g) })
    }

    /// Evaluate a word to a group element (empty word = identity).
    pub fn evaluate_word(&self, word: &[i32]) -> Result<GroupElement<T>, FuchsError> {
        let mut acc = GroupElement::identity();
        let budget = T::from_f64(1e-3).unwrap();
        for &l in word {
            acc = mat_mul(&acc, &self.letter(l)?, budget)?;
        }
        Ok(acc)
    }

    /// Hyperbolic area of the quotient surface, `4 pi (genus - 1)`.
    pub fn covolume(&self) -> f64 {
        4.0 * std::f64::consts::PI * (self.genus as f64 - 1.0)
    }
}

/// Check generator hyperbolicity and the relator, returning the covolume.
pub fn validate_group<T: Real>(pres: &GroupPresentation<T>) -> Result<f64, FuchsError> {
    for (i, g) in pres.generators.iter().enumerate() {
        g.check_unit_det()?;
        match classify_element(g)? {
            ElementClass::Hyperbolic => {}
            other => return Err(FuchsError::NonHyperbolicGenerator(i + 1, other)),
        }
    }
    let rel = pres.evaluate_word(&pres.relator)?;
    // canonical sign identifies -I with I
    let d = rel.entry_dist(&GroupElement::identity()).to_f64();
    if d > 1e-8 {
        return Err(FuchsError::BadRelator(d));
    }
    Ok(pres.covolume())
}

/// Finite-index cover described by one permutation of `{0..k-1}` per
/// generator (monodromy of the covering).
#[derive(Debug, Clone)]
pub struct CoverSpec {
    pub degree: usize,
    pub images: Vec<Vec<usize>>,
}

impl CoverSpec {
    pub fn trivial() -> Self {
        CoverSpec { degree: 1, images: Vec::new() }
    }

    fn perm_of_letter(&self, l: i32, out: &mut Vec<usize>) {
        let k = l.unsigned_abs() as usize - 1;
        out.clear();
        if k >= self.images.len() {
            // trivial cover: identity permutation
            out.extend(0..self.degree);
            return;
        }
        if l > 0 {
            out.extend_from_slice(&self.images[k]);
        } else {
            out.resize(self.degree, 0);
            for (i, &j) in self.images[k].iter().enumerate() {
                out[j] = i;
            }
        }
    }

    /// Image permutation of a word (left-to-right composition:
    /// `sigma(w1 w2) = sigma(w2) ∘ sigma(w1)` acting on sheets by
    /// following the path letter by letter).
    pub fn word_permutation(&self, word: &[i32]) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.degree).collect();
        let mut lp = Vec::new();
        for &l in word {
            self.perm_of_letter(l, &mut lp);
            for x in p.iter_mut() {
                *x = lp[*x];
            }
        }
        p
    }

    /// Validate against a presentation: the relator must map to the
    /// identity permutation and the image group must be transitive.
    pub fn validate(&self, pres_relator: &[i32], n_generators: usize) -> Result<(), FuchsError> {
        if self.degree == 0 {
            return Err(FuchsError::InvalidCover("degree 0".into()));
        }
        if self.degree > 1 && self.images.len() != n_generators {
            return Err(FuchsError::InvalidCover(format!(
                "{} permutations for {} generators",
                self.images.len(),
                n_generators
            )));
        }
        for (i, p) in self.images.iter().enumerate() {
            let mut seen = vec![false; self.degree];
            if p.len() != self.degree {
                return Err(FuchsError::InvalidCover(format!(
                    "permutation {i} has length {}",
                    p.len()
                )));
            }
            for &x in p {
                if x >= self.degree || seen[x] {
                    return Err(FuchsError::InvalidCover(format!(
                        "image {i} is not a permutation"
                    )));
                }
                seen[x] = true;
            }
        }
        let rp = self.word_permutation(pres_relator);
        if rp.iter().enumerate().any(|(i, &x)| i != x) {
            return Err(FuchsError::InvalidCover("relator image is not the identity".into()));
        }
        // transitivity: BFS on sheets
        let mut seen = vec![false; self.degree];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(s) = stack.pop() {
            for p in &self.images {
                for &t in &[p[s], p.iter().position(|&x| x == s).unwrap()] {
                    if !seen[t] {
                        seen[t] = true;
                        count += 1;
                        stack.push(t);
                    }
                }
            }
        }
        if self.degree > 1 && count != self.degree {
            return Err(FuchsError::InvalidCover(format!(
                "image group is not transitive ({count}/{} sheets reached)",
                self.degree
            )));
        }
        Ok(())
    }
}

/// Enumeration tuning knobs.
#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub dedup_tol: f64,
    pub max_elements: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { dedup_tol: 1e-12, max_elements: 4_000_000 }
    }
}

/// Deduplicated set of nontrivial group elements, certified complete for
/// all conjugacy classes of translation length at most
/// `2 acosh(complete_up_to_trace / 2)`: every such class has all its
/// axis-through-domain representatives stored.
pub struct BallEnumeration<T: Real> {
    pub trace_bound: f64,
    pub complete_up_to_trace: f64,
    /// elements with |tr| <= trace_bound (canonical, deduplicated)
    pub elements: Vec<GroupElement<T>>,
    /// full breadth-first visited set (superset, used as conjugator pool)
    visited: DedupGrid<T>,
    /// indices into `visited` of the kept `elements`
    kept_ids: Vec<usize>,
    /// circumradius bound of the Dirichlet domain
    pub domain_radius: f64,
    /// minimum pairwise separation observed in the audit
    pub separation: f64,
    pub keep_radius: f64,
    pub expand_radius: f64,
}

impl<T: Real> BallEnumeration<T> {
    pub fn visited_elements(&self) -> &[GroupElement<T>] {
        self.visited.elements()
    }

    /// Index of an element in the visited set, if present.
    pub fn find_visited(&self, g: &GroupElement<T>) -> Option<usize> {
        self.visited.find(g)
    }

    pub fn kept_ids(&self) -> &[usize] {
        &self.kept_ids
    }
}

/// Breadth-first enumeration of all elements of the group with origin
/// displacement up to `expand_radius`, keeping those with
/// `|tr| <= trace_bound`.
pub fn enumerate_ball<T: Real>(
    pres: &GroupPresentation<T>,
    trace_bound: f64,
    opts: &EnumOptions,
) -> Result<BallEnumeration<T>, FuchsError> {
    let tol = T::from_f64(opts.dedup_tol).unwrap();
    let budget = tol / T::from_f64(4.0).unwrap();

    // generator alphabet: g_1..g_n and inverses
    let mut alphabet: Vec<(i32, GroupElement<T>)> = Vec::new();
    for (i, g) in pres.generators.iter().enumerate() {
        alphabet.push((i as i32 + 1, g.clone()));
        alphabet.push((-(i as i32) - 1, mat_inv(g)));
    }

    // Dirichlet circumradius from the generator orbit of the origin
    let orbit: Vec<(f64, f64)> = alphabet
        .iter()
        .map(|(_, g)| {
            let w = g.b().div(g.d()).map_err(NumError::from)?;
            Ok::<_, NumError>((w.re.value.to_f64(), w.im.value.to_f64()))
        })
        .collect::<Result<_, _>>()
        .map_err(FuchsError::from)?;
    let r0 = dirichlet_circumradius(&orbit).ok_or(FuchsError::NoCompactDomain)?;

    let ell_max = if trace_bound > 2.0 {
        2.0 * (trace_bound / 2.0).acosh()
    } else {
        0.0
    };
    let keep_radius = ell_max + 2.0 * r0 + 0.05;
    let expand_radius = keep_radius + r0 + 0.05;
    let expand_t = T::from_f64(expand_radius).unwrap();

    let mut visited: DedupGrid<T> = DedupGrid::new(tol);
    visited.insert(GroupElement::identity()).map_err(FuchsError::from)?;
    let mut frontier: Vec<usize> = vec![0];

    while !frontier.is_empty() {
        // expand the whole frontier in parallel (deterministic order)
        let children: Vec<GroupElement<T>> = frontier
            .par_iter()
            .flat_map_iter(|&id| {
                let parent = visited.elements()[id].clone();
                alphabet
                    .iter()
                    .filter_map(move |(_, s)| mat_mul(&parent, s, budget).ok())
                    .collect::<Vec<_>>()
                    .into_iter()
            })
            .collect();
        let mut next = Vec::new();
        for child in children {
            let disp = origin_displacement(&child).map_err(FuchsError::from)?;
            if disp.value > expand_t {
                continue;
            }
            let (id, fresh) = visited.insert(child).map_err(FuchsError::from)?;
            if fresh {
                next.push(id);
                if visited.len() > opts.max_elements {
                    return Err(FuchsError::BudgetExceeded(visited.len()));
                }
            }
        }
        frontier = next;
    }

    let separation = audit_separation_fast(visited.elements(), tol)
        .map_err(FuchsError::from)?
        .to_f64();

    let tb = T::from_f64(trace_bound).unwrap();
    let tol_t = tol;
    let mut elements = Vec::new();
    let mut kept_ids = Vec::new();
    for (id, g) in visited.elements().iter().enumerate() {
        if id == 0 {
            continue; // identity
        }
        let t = g.trace_abs();
        if t.value <= tb + tol_t {
            elements.push(g.clone());
            kept_ids.push(id);
        }
    }

    Ok(BallEnumeration {
        trace_bound,
        complete_up_to_trace: trace_bound,
        elements,
        visited,
        kept_ids,
        domain_radius: r0,
        separation,
        keep_radius,
        expand_radius,
    })
}

/// Restrict a ball to the elements of a cover subgroup: those whose word
/// maps to a permutation fixing the basepoint sheet 0.
pub fn cover_elements<T: Real>(
    pres: &GroupPresentation<T>,
    cover: &CoverSpec,
    ball: &BallEnumeration<T>,
) -> Result<Vec<GroupElement<T>>, FuchsError> {
    cover.validate(&pres.relator, pres.n_generators())?;
    let mut out = Vec::new();
    for g in &ball.elements {
        let word = g.word.as_ref().ok_or_else(|| {
            FuchsError::InvalidCover("ball element without word".into())
        })?;
        let p = cover.word_permutation(word);
        if p[0] == 0 {
            out.push(g.clone());
        }
    }
    Ok(out)
}

/// One conjugacy class found in a ball.
#[derive(Debug, Clone)]
pub struct ClassRecord {
    /// lexicographically least word among members (representative)
    pub word: Vec<i32>,
    pub ell: f64,
    pub trace_abs: f64,
    /// primitive length and power: ell = m * ell0
    pub ell0: f64,
    pub m: usize,
    /// number of ball elements in the class
    pub size: usize,
}

/// Aggregated spectrum line: all classes sharing (ell0, m).
#[derive(Debug, Clone, PartialEq)]
pub struct ConjClassRecord {
    pub ell0: f64,
    pub m: usize,
    pub ell: f64,
    pub multiplicity: usize,
    pub trace_abs: f64,
}

/// Truncated length spectrum with covolume and completeness certificate.
#[derive(Debug, Clone)]
pub struct LengthSpectrum {
    pub cutoff: f64,
    pub records: Vec<ConjClassRecord>,
    pub covolume: f64,
    pub complete: bool,
}

impl LengthSpectrum {
    pub fn systole(&self) -> Result<f64, FuchsError> {
        self.records
            .first()
            .map(|r| r.ell)
            .ok_or(FuchsError::EmptySpectrum(self.cutoff))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != c {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn word_lex_less(a: &[i32], b: &[i32]) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// Union-find over the visited set with single-generator conjugation
/// moves `g ~ s g s^{-1}` (kept when the conjugate is still in the
/// visited set). Returns the component id of every visited element.
fn conjugation_components<T: Real>(
    pres: &GroupPresentation<T>,
    ball: &BallEnumeration<T>,
) -> Result<Vec<usize>, FuchsError> {
    let n = ball.visited_elements().len();
    let budget = T::from_f64(1e-3).unwrap();
    let mut alphabet: Vec<GroupElement<T>> = Vec::new();
    for g in &pres.generators {
        alphabet.push(g.clone());
        alphabet.push(mat_inv(g));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|id| {
            let g = &ball.visited_elements()[id];
            let mut out = Vec::new();
            for s in &alphabet {
                let si = mat_inv(s);
                if let Ok(sg) = mat_mul(s, g, budget) {
                    if let Ok(c) = mat_mul(&sg, &si, budget) {
                        if let Some(j) = ball.find_visited(&c) {
                            out.push((id, j));
                        }
                    }
                }
            }
            out.into_iter()
        })
        .collect();
    let mut uf = UnionFind::new(n);
    for (a, b) in pairs {
        uf.union(a, b);
    }
    Ok((0..n).map(|i| uf.find(i)).collect())
}

/// Partition the kept ball elements into conjugacy classes.
///
/// Classes are merged through chains of single-generator conjugations
/// inside the visited set; this realizes Dirichlet-style reduction since
/// the generators are the domain side pairings. `[g]` and `[g^{-1}]`
/// count as separate classes.
pub fn conjugacy_classes<T: Real>(
    pres: &GroupPresentation<T>,
    ball: &BallEnumeration<T>,
) -> Result<Vec<ClassRecord>, FuchsError> {
    let comp = conjugation_components(pres, ball)?;
    conjugacy_classes_from_components(pres, ball, &comp)
}

fn conjugacy_classes_from_components<T: Real>(
    _pres: &GroupPresentation<T>,
    ball: &BallEnumeration<T>,
    comp: &[usize],
) -> Result<Vec<ClassRecord>, FuchsError> {
    use std::collections::hash_map::Entry;
    use std::collections::HashMap;
    let mut classes: HashMap<usize, (Vec<i32>, f64, f64, usize)> = HashMap::new();
    for (&id, g) in ball.kept_ids().iter().zip(ball.elements.iter()) {
        let root = comp[id];
        let word = g.word.clone().unwrap_or_default();
        let ell = translation_length(g)?.value.to_f64();
        let tr = g.trace_abs().value.to_f64();
        match classes.entry(root) {
            Entry::Occupied(mut o) => {
                let e = o.get_mut();
                if word_lex_less(&word, &e.0) {
                    e.0 = word;
                }
                e.3 += 1;
            }
            Entry::Vacant(v) => {
                v.insert((word, ell, tr, 1));
            }
        }
    }
    let mut out: Vec<ClassRecord> = classes
        .into_values()
        .map(|(word, ell, trace_abs, size)| ClassRecord {
            word,
            ell,
            trace_abs,
            ell0: ell,
            m: 1,
            size,
        })
        .collect();
    out.sort_by(|a, b| {
        a.ell
            .partial_cmp(&b.ell)
            .unwrap()
            .then_with(|| if word_lex_less(&a.word, &b.word) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            })
    });
    Ok(out)
}

/// Smallest-length root of `g` over a ball that is complete up to
/// `|tr g|`: the maximal `m` with `g` conjugate to an `m`-th power, with
/// `ell(root) = ell(g)/m`. Roots have smaller trace than `g`, so a
/// complete ball contains a root representative.
pub fn primitive_decomposition<T: Real>(
    pres: &GroupPresentation<T>,
    g: &GroupElement<T>,
    ball: &BallEnumeration<T>,
    comp: &[usize],
) -> Result<(f64, usize), FuchsError> {
    let ell = translation_length(g)?.value.to_f64();
    let tr = g.trace_abs().value.to_f64();
    if tr > ball.complete_up_to_trace + 1e-9 {
        return Err(FuchsError::IncompleteBall {
            required: tr,
            certified: ball.complete_up_to_trace,
        });
    }
    let g_id = ball
        .find_visited(g)
        .ok_or_else(|| FuchsError::IncompleteBall { required: tr, certified: ball.complete_up_to_trace })?;
    let g_comp = comp[g_id];
    let budget = T::from_f64(1e-3).unwrap();
    // systole lower-bounds candidate root lengths
    let min_ell = ball
        .elements
        .iter()
        .filter_map(|h| translation_length(h).ok())
        .map(|l| l.value.to_f64())
        .fold(f64::INFINITY, f64::min);
    let m_max = (ell / min_ell + 0.5).floor() as usize;
    for m in (2..=m_max.max(1)).rev() {
        let ell0 = ell / m as f64;
        let tr0 = 2.0 * (ell0 / 2.0).cosh();
        for h in &ball.elements {
            let trh = h.trace_abs().value.to_f64();
            if (trh - tr0).abs() > 1e-6 {
                continue;
            }
            // h^m conjugate to g?
            let mut p = h.clone();
            let mut ok = true;
            for _ in 1..m {
                match mat_mul(&p, h, budget) {
                    Ok(q) => p = q,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            if let Some(pid) = ball.find_visited(&p) {
                if comp[pid] == g_comp {
                    return Ok((ell0, m));
                }
            }
        }
    }
    let _ = pres;
    Ok((ell, 1))
}

fn aggregate_records(classes: &[ClassRecord], cutoff: f64) -> Vec<ConjClassRecord> {
    use std::collections::BTreeMap;
    // key on rounded (ell0, m) to aggregate equal-length classes
    let mut agg: BTreeMap<(i64, usize), ConjClassRecord> = BTreeMap::new();
    for c in classes {
        if c.ell > cutoff + 1e-9 {
            continue;
        }
        let key = ((c.ell0 / 1e-9).round() as i64, c.m);
        agg.entry(key)
            .and_modify(|r| r.multiplicity += 1)
            .or_insert(ConjClassRecord {
                ell0: c.ell0,
                m: c.m,
                ell: c.ell,
                multiplicity: 1,
                trace_abs: c.trace_abs,
            });
    }
    let mut out: Vec<ConjClassRecord> = agg.into_values().collect();
    out.sort_by(|a, b| a.ell.partial_cmp(&b.ell).unwrap().then(a.m.cmp(&b.m)));
    out
}

/// Full pipeline: enumerate, classify, decompose, aggregate.
pub fn length_spectrum<T: Real>(
    pres: &GroupPresentation<T>,
    cutoff: f64,
    opts: &EnumOptions,
) -> Result<LengthSpectrum, FuchsError> {
    let (spec, _classes, _ball) = length_spectrum_with_classes(pres, cutoff, opts)?;
    Ok(spec)
}

/// As [`length_spectrum`], additionally returning the per-class records
/// (with representative words, needed for cover lifting) and the ball.
pub fn length_spectrum_with_classes<T: Real>(
    pres: &GroupPresentation<T>,
    cutoff: f64,
    opts: &EnumOptions,
) -> Result<(LengthSpectrum, Vec<ClassRecord>, BallEnumeration<T>), FuchsError> {
    let covolume = validate_group(pres)?;
    let trace_bound = 2.0 * (cutoff / 2.0).cosh();
    let ball = enumerate_ball(pres, trace_bound, opts)?;
    let comp = conjugation_components(pres, &ball)?;
    let mut classes = conjugacy_classes_from_components(pres, &ball, &comp)?;
    for c in classes.iter_mut() {
        let rep = pres.evaluate_word(&c.word)?;
        let (ell0, m) = primitive_decomposition(pres, &rep, &ball, &comp)?;
        c.ell0 = ell0;
        c.m = m;
    }
    let records = aggregate_records(&classes, cutoff);
    let spec = LengthSpectrum { cutoff, records, covolume, complete: true };
    Ok((spec, classes, ball))
}

/// Cover length spectrum by cycle-structure lifting: a primitive base
/// class of length `ell0` whose monodromy permutation has cycles of
/// lengths `c_1 + ... + c_r = k` lifts to `r` primitive cover classes of
/// lengths `c_i * ell0`; powers of those fill in the non-primitive lines.
pub fn cover_length_spectrum<T: Real>(
    pres: &GroupPresentation<T>,
    cover: &CoverSpec,
    cutoff: f64,
    opts: &EnumOptions,
) -> Result<LengthSpectrum, FuchsError> {
    cover.validate(&pres.relator, pres.n_generators())?;
    let (base, classes, _ball) = length_spectrum_with_classes(pres, cutoff, opts)?;
    Ok(lift_spectrum(&classes, cover, cutoff, base.covolume, base.complete))
}

/// Lift base primitive classes through a cover's monodromy without
/// re-enumerating. The base classes must be complete up to `cutoff`.
pub fn lift_spectrum(
    classes: &[ClassRecord],
    cover: &CoverSpec,
    cutoff: f64,
    base_covolume: f64,
    complete: bool,
) -> LengthSpectrum {
    let mut lifted: Vec<ClassRecord> = Vec::new();
    for c in classes.iter().filter(|c| c.m == 1) {
        let p = cover.word_permutation(&c.word);
        for cyc in cycle_lengths(&p) {
            let ell0 = cyc as f64 * c.ell0;
            let mut m = 1;
            loop {
                let ell = m as f64 * ell0;
                if ell > cutoff + 1e-9 {
                    break;
                }
                lifted.push(ClassRecord {
                    word: c.word.clone(),
                    ell,
                    trace_abs: 2.0 * (ell / 2.0).cosh(),
                    ell0,
                    m,
                    size: 1,
                });
                m += 1;
            }
        }
    }
    LengthSpectrum {
        cutoff,
        records: aggregate_records(&lifted, cutoff),
        covolume: cover.degree as f64 * base_covolume,
        complete,
    }
}

/// Cycle lengths of a permutation.
pub fn cycle_lengths(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = p[x];
        }
        out.push(len);
    }
    out
}

// ---------------------------------------------------------------------------
// Shipped example group: genus-2 surface with the maximally symmetric
// hyperbolic structure. Disk-model generators
//   g_k = [[1+sqrt2, e^{i k pi/4} sqrt(2+2 sqrt2)],
//          [e^{-i k pi/4} sqrt(2+2 sqrt2), 1+sqrt2]],  k = 0..3,
// which pair opposite sides of the regular octagon fundamental domain.

/// The shipped genus-2 presentation, built in the working precision.
pub fn octagon_group<T: Real>() -> GroupPresentation<T> {
    use crate::numcore::{PrecComplex, PrecScalar};
    let one = T::one();
    let two = T::from_f64(2.0).unwrap();
    let sqrt2 = two.sqrt();
    let a = one + sqrt2; // diagonal entry, trace/2
    let r = (two + two * sqrt2).sqrt(); // |off-diagonal|
    let half_sqrt2 = sqrt2 / two;
    // e^{i k pi/4} for k = 0..3: (1,0), (s,s), (0,1), (-s,s) with s = sqrt2/2
    let phases: [(T, T); 4] = [
        (one, T::zero()),
        (half_sqrt2, half_sqrt2),
        (T::zero(), one),
        (-half_sqrt2, half_sqrt2),
    ];
    let sc = |v: T| PrecScalar::rounded(v);
    let generators = phases
        .iter()
        .enumerate()
        .map(|(k, &(cx, sx))| {
            let b = PrecComplex::new(sc(r * cx), sc(r * sx));
            let diag = PrecComplex::new(sc(a), PrecScalar::exact(T::zero()));
            GroupElement::from_entries([diag, b, b.conj(), diag], Some(vec![k as i32 + 1]))
        })
        .collect();
    GroupPresentation {
        genus: 2,
        generators,
        relator: vec![1, -2, 3, -4, -1, 2, -3, 4],
    }
}
