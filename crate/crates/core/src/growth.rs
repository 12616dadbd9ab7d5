//! Exact growth of powers of generating subspaces, the bound checkers built
//! on them, the subspace-inclusion lemma checks and the `p` witness search.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::coeffring::RingElem;
use crate::ddalgebra::{CheckResult, DdAlgebra, DdElement};
use crate::error::{Error, Result};
use crate::gkestimate::GkReport;
use crate::linbasis::{
    element_to_vec, includes, span_contains, span_from, span_product_with_budget, span_sum, Atom, Echelon,
    KSpan, SparseVec, DEFAULT_ATOM_BUDGET,
};

/// `W = span(V) + (X if include_d) + (Y if include_s)` with run limits.
#[derive(Clone, Debug)]
pub struct GeneratingSet {
    pub v_basis: Vec<DdElement>,
    pub include_d: bool,
    pub include_s: bool,
    pub r_max: usize,
    pub atom_budget: usize,
}

impl GeneratingSet {
    pub fn new(v_basis: Vec<DdElement>, include_d: bool, include_s: bool, r_max: usize) -> Self {
        GeneratingSet { v_basis, include_d, include_s, r_max, atom_budget: DEFAULT_ATOM_BUDGET }
    }

    /// Explicit generators, no implicit D's or S's.
    pub fn from_generators(gens: Vec<DdElement>, r_max: usize) -> Self {
        Self::new(gens, false, false, r_max)
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.atom_budget = budget;
        self
    }

    pub fn w_basis(&self, alg: &DdAlgebra) -> Vec<DdElement> {
        let mut w = self.v_basis.clone();
        if self.include_d {
            w.extend((0..alg.n()).map(|j| alg.d(j)));
        }
        if self.include_s {
            w.extend((0..alg.m()).map(|i| alg.s(i)));
        }
        w
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthResult {
    /// `dim(W^r)` for r = 1..; shorter than r_max when truncated.
    pub dims: Vec<usize>,
    /// Distinct atoms touched after each completed power.
    pub atoms: Vec<usize>,
    pub atoms_used: usize,
    pub truncated: bool,
    pub reason: Option<String>,
}

/// Successive powers `W^1, W^2, ...` of a finite-dimensional subspace.
///
/// When `1 ∈ W`, `W^{r+1} = W^r + N_r W` where `N_r` are the rows added at
/// step r, so only the frontier is multiplied.
pub struct PowerTower<'a> {
    alg: &'a DdAlgebra,
    gens: Vec<DdElement>,
    unital: bool,
    ech: Echelon<Atom>,
    frontier: Vec<SparseVec<Atom>>,
    registry: BTreeSet<Atom>,
    budget: usize,
    power: usize,
}

impl<'a> PowerTower<'a> {
    /// Starts at `W^1 = span(gens)`.
    pub fn new(alg: &'a DdAlgebra, gens: &[DdElement], budget: usize) -> Result<Self> {
        let w = span_from(gens);
        let unital = span_contains(&w, &alg.one());
        let mut ech = Echelon::new();
        let mut registry = BTreeSet::new();
        for row in w.rows() {
            registry.extend(row.keys().cloned());
            ech.insert(row.clone());
        }
        if registry.len() > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        Ok(PowerTower {
            alg,
            gens: w.basis(),
            unital,
            frontier: ech.rows().to_vec(),
            ech,
            registry,
            budget,
            power: 1,
        })
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn dim(&self) -> usize {
        self.ech.dim()
    }

    pub fn atoms(&self) -> usize {
        self.registry.len()
    }

    pub fn span(&self) -> KSpan {
        KSpan::from_echelon(self.ech.clone())
    }

    /// Advances to the next power. On budget exhaustion the tower is left unusable.
    pub fn step(&mut self) -> Result<()> {
        let sources: Vec<SparseVec<Atom>> =
            if self.unital { std::mem::take(&mut self.frontier) } else { self.ech.rows().to_vec() };
        let mut next = if self.unital { self.ech.clone() } else { Echelon::new() };
        let start = next.dim();
        for row in &sources {
            let u = crate::linbasis::vec_to_element(row);
            for g in &self.gens {
                let w = element_to_vec(&self.alg.mul_elem(&u, g));
                self.registry.extend(w.keys().cloned());
                if self.registry.len() > self.budget {
                    return Err(Error::BudgetExceeded { budget: self.budget });
                }
                next.insert(w);
            }
        }
        self.frontier = next.rows()[start..].to_vec();
        self.ech = next;
        self.power += 1;
        Ok(())
    }
}

/// Exact `dim(W^r)` for r = 1..=r_max.
pub fn power_dims(alg: &DdAlgebra, g: &GeneratingSet) -> Result<GrowthResult> {
    if g.r_max == 0 {
        return Err(Error::Precondition("r_max must be positive".into()));
    }
    if g.atom_budget == 0 {
        return Err(Error::Precondition("atom budget must be positive".into()));
    }
    let mut result = GrowthResult { dims: Vec::new(), atoms: Vec::new(), atoms_used: 0, truncated: false, reason: None };
    let truncate = |mut res: GrowthResult, e: Error, r: usize| {
        res.truncated = true;
        res.reason = Some(format!("{e} while computing power {r}"));
        res
    };
    let mut tower = match PowerTower::new(alg, &g.w_basis(alg), g.atom_budget) {
        Ok(t) => t,
        Err(e) => return Ok(truncate(result, e, 1)),
    };
    result.dims.push(tower.dim());
    result.atoms.push(tower.atoms());
    result.atoms_used = tower.atoms();
    while tower.power() < g.r_max {
        let r = tower.power() + 1;
        if let Err(e) = tower.step() {
            return Ok(truncate(result, e, r));
        }
        result.dims.push(tower.dim());
        result.atoms.push(tower.atoms());
        result.atoms_used = tower.atoms();
    }
    Ok(result)
}

/// Number of `alpha ∈ N^m` with `|alpha| <= r`, by enumeration.
pub fn count_bounded_exponents(m: usize, r: usize) -> u64 {
    fn go(vars_left: usize, budget: usize) -> u64 {
        if vars_left == 0 {
            return 1;
        }
        (0..=budget).map(|used| go(vars_left - 1, budget - used)).sum()
    }
    go(m, r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundReport {
    pub r: usize,
    pub dim_v_r: usize,
    pub card_alpha: u64,
    pub card_beta: u64,
    /// `dim(V^r) * card_alpha * card_beta`.
    pub required: u64,
    /// `dim(W^{3r})`, absent when the budget ran out.
    pub dim_w_3r: Option<usize>,
    pub passed: bool,
    pub truncated: bool,
}

fn ring_span_power(alg: &DdAlgebra, v: &KSpan, k: usize) -> Result<KSpan> {
    let mut acc = span_from(&[alg.one()]);
    for _ in 0..k {
        acc = span_product_with_budget(alg, &acc, v, DEFAULT_ATOM_BUDGET)?;
    }
    Ok(acc)
}

/// Checks `dim(W^{3r}) >= dim(V^r) * #{|alpha| <= r} * #{|beta| <= r}`.
pub fn check_lower_bound(alg: &DdAlgebra, v_basis: &[DdElement], r: usize) -> Result<LowerBoundReport> {
    let v = span_from(v_basis);
    if !span_contains(&v, &alg.one()) {
        return Err(Error::Precondition("1 must lie in span(V)".into()));
    }
    let dim_v_r = ring_span_power(alg, &v, r)?.dim();
    let card_alpha = count_bounded_exponents(alg.m(), r);
    let card_beta = count_bounded_exponents(alg.n(), r);
    let required = dim_v_r as u64 * card_alpha * card_beta;
    let dim_w_3r = if r == 0 {
        Some(1)
    } else {
        let g = GeneratingSet::new(v_basis.to_vec(), true, true, 3 * r);
        let res = power_dims(alg, &g)?;
        (!res.truncated).then(|| *res.dims.last().unwrap())
    };
    Ok(LowerBoundReport {
        r,
        dim_v_r,
        card_alpha,
        card_beta,
        required,
        dim_w_3r,
        passed: dim_w_3r.is_some_and(|d| d as u64 >= required),
        truncated: dim_w_3r.is_none(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RkUpperRow {
    pub r: usize,
    pub dim: usize,
    pub bound: u64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RkUpperReport {
    pub rows: Vec<RkUpperRow>,
    pub passed: bool,
    pub truncated: bool,
}

/// Over R = k: `dim(W^r) <= #{|alpha| <= r} * #{|beta| <= r}` with `W = k + X + Y`.
pub fn check_rk_upper(alg: &DdAlgebra, r_max: usize) -> Result<RkUpperReport> {
    if alg.ring().arity() != 0 {
        return Err(Error::Precondition("the coefficient ring must be the base field".into()));
    }
    let g = GeneratingSet::new(vec![alg.one()], true, true, r_max);
    let res = power_dims(alg, &g)?;
    let rows: Vec<RkUpperRow> = res
        .dims
        .iter()
        .enumerate()
        .map(|(i, &dim)| {
            let r = i + 1;
            let bound = count_bounded_exponents(alg.m(), r) * count_bounded_exponents(alg.n(), r);
            RkUpperRow { r, dim, bound, passed: dim as u64 <= bound }
        })
        .collect();
    Ok(RkUpperReport { passed: !res.truncated && rows.iter().all(|r| r.passed), rows, truncated: res.truncated })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InclusionStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclusionResult {
    pub lemma: String,
    pub index: usize,
    pub status: InclusionStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub hypotheses: Vec<CheckResult>,
    pub inclusions: Vec<InclusionResult>,
}

impl LemmaReport {
    pub fn all_applicable_pass(&self) -> bool {
        self.inclusions.iter().all(|i| i.status != InclusionStatus::Fail)
    }

    pub fn status(&self, lemma: &str, index: usize) -> Option<InclusionStatus> {
        self.inclusions.iter().find(|i| i.lemma == lemma && i.index == index).map(|i| i.status)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for h in &self.hypotheses {
            s.push_str(&format!("hypothesis {:24} {}\n", h.name, if h.passed { "holds" } else { "fails" }));
        }
        for i in &self.inclusions {
            let st = match i.status {
                InclusionStatus::Pass => "pass",
                InclusionStatus::Fail => "FAIL",
                InclusionStatus::NotApplicable => "n/a",
            };
            s.push_str(&format!("{:24} {:2} {st}\n", i.lemma, i.index));
        }
        s
    }
}

fn ring_part(e: &DdElement) -> Option<&RingElem> {
    let mut terms = e.terms();
    match (terms.next(), terms.next()) {
        (None, _) => None,
        (Some((mono, c)), None) if mono.is_one() => Some(c),
        _ => None,
    }
}

fn ring_elements(alg: &DdAlgebra, v_basis: &[DdElement]) -> Result<Vec<RingElem>> {
    v_basis
        .iter()
        .map(|e| {
            if e.is_zero() {
                Ok(alg.ring().zero())
            } else {
                ring_part(e).cloned().ok_or_else(|| Error::Precondition("V must lie in the coefficient ring".into()))
            }
        })
        .collect()
}

/// True when `sigma_i(span V) ⊆ span V` for every i.
pub fn sigma_stable(alg: &DdAlgebra, v_basis: &[DdElement]) -> Result<bool> {
    let v = span_from(v_basis);
    let rs = ring_elements(alg, v_basis)?;
    for (i, _) in alg.presentation().sigma_ring.iter().enumerate() {
        let mut alpha = vec![0; alg.m()];
        alpha[i] = 1;
        for r in &rs {
            if !span_contains(&v, &alg.from_ring(alg.sigma_power_ring(&alpha, r))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Lazily computed powers of a fixed subspace.
struct Powers<'a> {
    alg: &'a DdAlgebra,
    base: KSpan,
    cache: Vec<KSpan>,
}

impl<'a> Powers<'a> {
    fn new(alg: &'a DdAlgebra, base: KSpan) -> Self {
        Powers { alg, base, cache: vec![span_from(&[alg.one()])] }
    }

    fn get(&mut self, k: usize) -> Result<KSpan> {
        while self.cache.len() <= k {
            let next = span_product_with_budget(self.alg, self.cache.last().unwrap(), &self.base, DEFAULT_ATOM_BUDGET)?;
            self.cache.push(next);
        }
        Ok(self.cache[k].clone())
    }
}

fn product(alg: &DdAlgebra, factors: &[KSpan]) -> Result<KSpan> {
    let mut acc = span_from(&[alg.one()]);
    for f in factors {
        acc = span_product_with_budget(alg, &acc, f, DEFAULT_ATOM_BUDGET)?;
    }
    Ok(acc)
}

fn sum_all(spans: impl IntoIterator<Item = KSpan>) -> KSpan {
    spans.into_iter().fold(KSpan::zero(), |acc, s| span_sum(&acc, &s))
}

/// Checks the inclusions relating powers of `V`, `X = sum k D_j`, `Y = sum k S_i`
/// and `W = V + X + Y`, for s (and r) up to `s_max`.
pub fn check_lemma_inclusions(alg: &DdAlgebra, v_basis: &[DdElement], s_max: usize) -> Result<LemmaReport> {
    let p = alg.presentation();
    let v = span_from(v_basis);
    let rs = ring_elements(alg, v_basis)?;
    let mut vp = Powers::new(alg, v.clone());
    let v2 = vp.get(2)?;

    let mut hypotheses = Vec::new();
    let mut hyp = |name: &str, passed: bool| hypotheses.push(CheckResult { name: name.into(), passed, detail: String::new() });
    hyp("one-in-V", span_contains(&v, &alg.one()));
    hyp("sigma(V)-in-V", sigma_stable(alg, v_basis)?);
    let delta_ok = p.delta.iter().all(|d| {
        rs.iter().all(|r| span_contains(&v2, &alg.from_ring(alg.ring().apply_derivation(d, r).unwrap())))
    });
    hyp("delta(V)-in-V^2", delta_ok);
    let coeffs_ok = p.sigma_d.iter().flatten().flatten().all(|a| span_contains(&v, &alg.from_ring(a.clone())));
    hyp("sigma(D)-coefficients-in-V", coeffs_ok);
    let general = hypotheses.iter().all(|h| h.passed);
    let scalar = p.sigma_d_is_scalar();
    hypotheses.push(CheckResult { name: "sigma(D)-scalar".into(), passed: scalar, detail: String::new() });
    let commuting = general && scalar;

    let x = span_from(&(0..alg.n()).map(|j| alg.d(j)).collect::<Vec<_>>());
    let y = span_from(&(0..alg.m()).map(|i| alg.s(i)).collect::<Vec<_>>());
    let mut xp = Powers::new(alg, x.clone());
    let mut yp = Powers::new(alg, y.clone());

    let mut inclusions = Vec::new();
    let mut record = |lemma: &str, index: usize, applicable: bool, check: &mut dyn FnMut() -> Result<bool>| -> Result<()> {
        let status = if !applicable {
            InclusionStatus::NotApplicable
        } else if check()? {
            InclusionStatus::Pass
        } else {
            InclusionStatus::Fail
        };
        inclusions.push(InclusionResult { lemma: lemma.into(), index, status });
        Ok(())
    };

    record("XY<=VYX", 1, general, &mut || {
        Ok(includes(&product(alg, &[v.clone(), y.clone(), x.clone()])?, &product(alg, &[x.clone(), y.clone()])?))
    })?;
    record("XV<=VX+V^2", 1, general, &mut || {
        let rhs = span_sum(&product(alg, &[v.clone(), x.clone()])?, &v2);
        Ok(includes(&rhs, &product(alg, &[x.clone(), v.clone()])?))
    })?;
    record("YV=VY", 1, general, &mut || {
        let yv = product(alg, &[y.clone(), v.clone()])?;
        let vy = product(alg, &[v.clone(), y.clone()])?;
        Ok(includes(&yv, &vy) && includes(&vy, &yv))
    })?;

    for s in 0..=s_max {
        let xs = xp.get(s)?;
        let mut rhs_parts = Vec::new();
        if general {
            for i in 0..=s {
                rhs_parts.push(product(alg, &[vp.get(i + 1)?, xp.get(s - i)?])?);
            }
        }
        record("X^sV", s, general, &mut || {
            Ok(includes(&sum_all(rhs_parts.clone()), &product(alg, &[xs.clone(), v.clone()])?))
        })?;
    }

    for s in 1..=s_max {
        let xs = xp.get(s)?;
        let mut rhs_parts = Vec::new();
        if general {
            for i in 0..s {
                rhs_parts.push(product(alg, &[vp.get(s + i)?, y.clone(), xp.get(s - i)?])?);
            }
        }
        record("X^sY", s, general, &mut || {
            Ok(includes(&sum_all(rhs_parts.clone()), &product(alg, &[xs.clone(), y.clone()])?))
        })?;
    }

    let mut w_gens = v_basis.to_vec();
    w_gens.extend(x.basis());
    w_gens.extend(y.basis());
    let mut tower = PowerTower::new(alg, &w_gens, DEFAULT_ATOM_BUDGET)?;
    for r in 1..=s_max {
        if r > 1 {
            tower.step()?;
        }
        let wr = tower.span();
        let mut big = Vec::new();
        let mut tight = Vec::new();
        for i in 0..=r {
            for j in 0..=r - i {
                if general {
                    big.push(product(alg, &[vp.get(2 * r * r)?, yp.get(i)?, xp.get(j)?])?);
                }
                if commuting {
                    tight.push(product(alg, &[vp.get(2 * r - i - j)?, yp.get(i)?, xp.get(j)?])?);
                }
            }
        }
        record("W^r<=V^(2r^2)Y^iX^j", r, general, &mut || Ok(includes(&sum_all(big.clone()), &wr)))?;
        record("W^r<=V^(2r-i-j)Y^iX^j", r, commuting, &mut || Ok(includes(&sum_all(tight.clone()), &wr)))?;
    }

    Ok(LemmaReport { hypotheses, inclusions })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindP {
    Found(usize),
    NotSigmaStable,
    NotFound,
}

/// Least `p <= p_max` with `delta_j(V) ⊆ V^p` for all j, given `sigma_i(V) ⊆ V`.
pub fn find_p(alg: &DdAlgebra, v_basis: &[DdElement], p_max: usize) -> Result<FindP> {
    if !sigma_stable(alg, v_basis)? {
        return Ok(FindP::NotSigmaStable);
    }
    let rs = ring_elements(alg, v_basis)?;
    let images: Vec<DdElement> = alg
        .presentation()
        .delta
        .iter()
        .flat_map(|d| rs.iter().map(move |r| (d, r)))
        .map(|(d, r)| alg.from_ring(alg.ring().apply_derivation(d, r).unwrap()))
        .collect();
    let mut vp = Powers::new(alg, span_from(v_basis));
    for p in 1..=p_max {
        let span = vp.get(p)?;
        if images.iter().all(|e| span_contains(&span, e)) {
            return Ok(FindP::Found(p));
        }
    }
    Ok(FindP::NotFound)
}

/// CSV growth table with header `r,dim,atoms`.
pub fn growth_csv(res: &GrowthResult) -> String {
    let mut s = String::from("r,dim,atoms\n");
    for (i, (d, a)) in res.dims.iter().zip(&res.atoms).enumerate() {
        s.push_str(&format!("{},{d},{a}\n", i + 1));
    }
    s
}

#[derive(Serialize)]
struct GrowthJson<'a> {
    presentation: &'a str,
    dims: &'a [usize],
    atoms: &'a [usize],
    gk: Option<&'a GkReport>,
    truncated: bool,
    reason: Option<&'a str>,
}

/// JSON growth export, newline-terminated.
pub fn growth_json(res: &GrowthResult, fingerprint: &str, gk: Option<&GkReport>) -> String {
    let doc = GrowthJson {
        presentation: fingerprint,
        dims: &res.dims,
        atoms: &res.atoms,
        gk,
        truncated: res.truncated,
        reason: res.reason.as_deref(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}
