use std::collections::{BTreeMap, BTreeSet};

use crate::linalg::{coordinates_in_span, SparseRow};
use crate::scalar::{Backend, Scalar};
use crate::superalgebra::{partial_trace_space, BasedSuperAlgebra, BasisId, Element, IdealPower, Parity, PartialTrace};

use super::{LrError, SuperLieRinehart};

/// Images of the basis vectors of a module under a linear map.
pub type ModuleMap = Vec<SparseRow>;

/// A finite-dimensional right `(L, R)`-module.
#[derive(Clone, Debug)]
pub struct RightModule {
    pub name: String,
    labels: Vec<String>,
    parities: Vec<Parity>,
    backend: Backend,
    /// `m_a · X_g` at `action[g][a]`.
    action: Vec<ModuleMap>,
    /// `r_b · m_a` at `r_action[b][a]` for the basis `r_b` of R.
    r_action: Vec<ModuleMap>,
    functionals: Option<Vec<PartialTrace>>,
}

fn identity_map(n: usize, backend: Backend) -> ModuleMap {
    (0..n).map(|a| SparseRow::from([(a, Scalar::one(backend))])).collect()
}

fn axpy(acc: &mut SparseRow, k: &Scalar, v: &SparseRow) {
    for (i, x) in v {
        let slot = acc.entry(*i).or_insert_with(|| Scalar::zero(k.backend()));
        *slot += &(k * x);
    }
    acc.retain(|_, x| !x.is_zero());
}

impl RightModule {
    /// Builds and validates a module. Without `r_action` the base ring must be
    /// the ground field, acting by scalars.
    pub fn new(
        lr: &SuperLieRinehart,
        name: impl Into<String>,
        labels: Vec<String>,
        parities: Vec<Parity>,
        action: Vec<ModuleMap>,
        r_action: Option<Vec<ModuleMap>>,
    ) -> Result<Self, LrError> {
        let n = labels.len();
        let backend = lr.backend();
        let r_action = match r_action {
            Some(r) => r,
            None if lr.over_ground_field() => vec![identity_map(n, backend)],
            None => return Err(LrError::Module("a base ring other than the ground field needs an explicit R-action".into())),
        };
        let m = Self { name: name.into(), labels, parities, backend, action, r_action, functionals: None };
        m.validate(lr)?;
        Ok(m)
    }

    /// One-dimensional module with zero action.
    pub fn trivial(lr: &SuperLieRinehart) -> Result<Self, LrError> {
        let zero = vec![vec![SparseRow::new()]; lr.rank()];
        Self::new(lr, "trivial", vec!["1".into()], vec![Parity::Even], zero, None)
    }

    /// `L` acting on itself by `m·X = [m, X]` (ground field only).
    pub fn adjoint(lr: &SuperLieRinehart) -> Result<Self, LrError> {
        if !lr.over_ground_field() {
            return Err(LrError::Module("the adjoint module is only built over the ground field".into()));
        }
        let n = lr.rank();
        let action = (0..n)
            .map(|g| {
                (0..n)
                    .map(|a| lr.bracket_gens(a, g).into_iter().map(|(k, c)| (k, c.coeff(BasisId::Idx(0)))).filter(|(_, c)| !c.is_zero()).collect())
                    .collect()
            })
            .collect();
        let labels = lr.generators().iter().map(|g| g.name.clone()).collect();
        let parities = lr.generators().iter().map(|g| g.parity).collect();
        Self::new(lr, "adjoint", labels, parities, action, None)
    }

    /// The base ring as a module, `m·X = −X(m) + χ(X) m` for a character `χ`.
    pub fn base_ring(lr: &SuperLieRinehart, chi: &[Element]) -> Result<Self, LrError> {
        let base = lr.base();
        let ids = base.basis()?;
        let n = ids.len();
        if chi.len() != lr.rank() {
            return Err(LrError::Module("one character value per generator".into()));
        }
        let mut action = Vec::with_capacity(lr.rank());
        for (g, x) in chi.iter().enumerate() {
            let mut map = Vec::with_capacity(n);
            for &b in &ids {
                let m = Element::basis(base.backend(), b);
                let img = &base.mul(x, &m)? - &lr.anchor_apply(g, &m)?;
                map.push(base.to_row(&img)?);
            }
            action.push(map);
        }
        let mut r_action = Vec::with_capacity(n);
        for &r in &ids {
            let mut map = Vec::with_capacity(n);
            for &b in &ids {
                map.push(base.to_row(&base.mul_basis(r, b))?);
            }
            r_action.push(map);
        }
        let labels = ids.iter().map(|b| base.label(*b)).collect();
        let parities = ids.iter().map(|b| base.parity(*b)).collect::<Result<_, _>>()?;
        Self::new(lr, "base_ring", labels, parities, action, Some(r_action))
    }

    /// All functionals on a finite algebra `B` with `(f·X)(b) = f(X(b))`, `X` acting through the pair's action.
    pub fn dual_of_action(lr: &SuperLieRinehart, b_alg: &BasedSuperAlgebra) -> Result<Self, LrError> {
        let ids = b_alg.basis()?;
        let mut action = Vec::with_capacity(lr.rank());
        for g in 0..lr.rank() {
            let d = lr.action(g).ok_or_else(|| LrError::Module(format!("generator {} has no action", lr.generators()[g].name)))?;
            let mut map = vec![SparseRow::new(); ids.len()];
            for (j, &b) in ids.iter().enumerate() {
                for (k, c) in d.apply_basis(b_alg, b)?.terms() {
                    let BasisId::Idx(k) = k else { unreachable!() };
                    map[*k].insert(j, c.clone());
                }
            }
            action.push(map);
        }
        let labels = ids.iter().map(|b| format!("{}*", b_alg.label(*b))).collect();
        let parities = ids.iter().map(|b| b_alg.parity(*b)).collect::<Result<_, _>>()?;
        let mut m = Self::new(lr, "dual", labels, parities, action, None)?;
        m.functionals = Some(ids.iter().map(|b| PartialTrace::new(format!("{}*", b_alg.label(*b)), BTreeMap::from([(*b, Scalar::one(b_alg.backend()))]))).collect());
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn rank(&self) -> usize {
        self.action.len()
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn parity(&self, a: usize) -> Parity {
        self.parities[a]
    }

    /// The partial traces behind the basis vectors, when this is a trace module.
    pub fn functionals(&self) -> Option<&[PartialTrace]> {
        self.functionals.as_deref()
    }

    /// `m_a · X_g`.
    pub fn act(&self, a: usize, g: usize) -> &SparseRow {
        &self.action[g][a]
    }

    pub fn act_vector(&self, v: &SparseRow, g: usize) -> SparseRow {
        let mut out = SparseRow::new();
        for (a, c) in v {
            axpy(&mut out, c, &self.action[g][*a]);
        }
        out
    }

    /// `r · m_a` for `r` in the base ring.
    pub fn r_act(&self, r: &Element, a: usize) -> Result<SparseRow, LrError> {
        let mut out = SparseRow::new();
        for (id, c) in r.terms() {
            let BasisId::Idx(b) = id else { return Err(LrError::Module("base ring element outside the basis".into())) };
            let map = self.r_action.get(*b).ok_or_else(|| LrError::Module("base ring element outside the basis".into()))?;
            axpy(&mut out, c, &map[a]);
        }
        Ok(out)
    }

    fn r_act_vector(&self, r: &Element, v: &SparseRow) -> Result<SparseRow, LrError> {
        let mut out = SparseRow::new();
        for (a, c) in v {
            axpy(&mut out, c, &self.r_act(r, *a)?);
        }
        Ok(out)
    }

    fn validate(&self, lr: &SuperLieRinehart) -> Result<(), LrError> {
        let n = self.dim();
        if self.parities.len() != n {
            return Err(LrError::Module("labels and parities differ in length".into()));
        }
        if self.action.len() != lr.rank() {
            return Err(LrError::Module(format!("action given for {} generators, pair has {}", self.action.len(), lr.rank())));
        }
        let base_dim = lr.base().dim().unwrap_or(0);
        if self.r_action.len() != base_dim {
            return Err(LrError::Module("R-action must list every basis element of R".into()));
        }
        for map in self.action.iter().chain(&self.r_action) {
            if map.len() != n || map.iter().flat_map(|r| r.keys()).any(|&k| k >= n) {
                return Err(LrError::Module("action matrix has the wrong shape".into()));
            }
            if map.iter().flat_map(|r| r.values()).any(|x| x.backend() != self.backend) {
                return Err(LrError::Module("action entries use another backend".into()));
            }
        }
        let fail = |axiom: &'static str, detail: String| Err(LrError::Axiom { axiom, detail });
        for a in 0..n {
            let m = SparseRow::from([(a, Scalar::one(self.backend))]);
            for i in 0..lr.rank() {
                for j in 0..lr.rank() {
                    // m·[X,Y] = (m·X)·Y − (−1)^{|X||Y|} (m·Y)·X
                    let mut lhs = SparseRow::new();
                    for (k, r) in lr.bracket_gens(i, j) {
                        let rm = self.r_act(&r, a)?;
                        axpy(&mut lhs, &Scalar::one(self.backend), &self.act_vector(&rm, k));
                    }
                    let mut rhs = self.act_vector(&self.act_vector(&m, i), j);
                    let sign = if lr.parity(i).koszul(lr.parity(j)) { 1 } else { -1 };
                    axpy(&mut rhs, &Scalar::from_i64(self.backend, sign), &self.act_vector(&self.act_vector(&m, j), i));
                    if !close(&lhs, &rhs) {
                        return fail("right action compatibility", format!("on {} with ({}, {})", self.labels[a], lr.generators()[i].name, lr.generators()[j].name));
                    }
                }
            }
            if lr.over_ground_field() {
                continue;
            }
            for r in lr.base().basis()? {
                let r = Element::basis(self.backend, r);
                for i in 0..lr.rank() {
                    // (r m)·X = r (m·X) − X(r) m
                    let lhs = self.act_vector(&self.r_act(&r, a)?, i);
                    let mut rhs = self.r_act_vector(&r, &self.act_vector(&m, i))?;
                    let xr = lr.anchor_apply(i, &r)?;
                    axpy(&mut rhs, &Scalar::from_i64(self.backend, -1), &self.r_act(&xr, a)?);
                    if !close(&lhs, &rhs) {
                        return fail("module Leibniz rule", format!("on {} with {}", self.labels[a], lr.generators()[i].name));
                    }
                }
            }
        }
        Ok(())
    }
}

fn close(a: &SparseRow, b: &SparseRow) -> bool {
    let keys: BTreeSet<usize> = a.keys().chain(b.keys()).copied().collect();
    keys.into_iter().all(|k| {
        let x = a.get(&k).map(|v| v.to_complex()).unwrap_or_default();
        let y = b.get(&k).map(|v| v.to_complex()).unwrap_or_default();
        match (a.get(&k), b.get(&k)) {
            (Some(u), Some(v)) if u.backend().is_exact() => u == v,
            (Some(u), None) | (None, Some(u)) if u.backend().is_exact() => u.is_zero(),
            _ => (x - y).norm() <= 1e-9,
        }
    })
}

/// Parity of a homogeneous functional from the parity of its support.
fn functional_parity(alg: &BasedSuperAlgebra, t: &PartialTrace) -> Result<Parity, LrError> {
    let mut found = None;
    for id in t.values.keys() {
        let p = alg.parity(*id)?;
        if found.is_some_and(|q| q != p) {
            return Err(LrError::Module(format!("functional {} is not homogeneous", t.name)));
        }
        found = Some(p);
    }
    Ok(found.unwrap_or(Parity::Even))
}

/// The space `H⁰(B, (Jᵖ)*)` of partial traces with `(τ·X)(j) = τ(X(j))`.
pub fn trace_module(b_alg: &BasedSuperAlgebra, jp: &IdealPower, lr: &SuperLieRinehart) -> Result<RightModule, LrError> {
    let traces = partial_trace_space(b_alg, jp)?;
    let rows = jp.spanning_set(b_alg)?;
    // Values of each basis trace on the echelon rows of Jᵖ; functionals on Jᵖ are determined by them.
    let table: Vec<Vec<Scalar>> = traces.iter().map(|t| rows.iter().map(|r| t.eval(r)).collect()).collect();
    let mut action = Vec::with_capacity(lr.rank());
    for g in 0..lr.rank() {
        let d = lr.action(g).ok_or_else(|| LrError::Module(format!("generator {} has no action", lr.generators()[g].name)))?;
        let images: Vec<Element> = rows.iter().map(|r| d.apply(b_alg, r)).collect::<Result<_, _>>()?;
        for img in &images {
            if !jp.contains(b_alg, img)? {
                return Err(LrError::NotPreserved(format!("{} maps J^{} outside itself", d.name, jp.degree())));
            }
        }
        let mut map = Vec::with_capacity(traces.len());
        for t in &traces {
            let values: Vec<Scalar> = images.iter().map(|x| t.eval(x)).collect();
            let coords = coordinates_in_span(&values, &table)?
                .ok_or_else(|| LrError::NotWellDefined(format!("{}·{} is not a partial trace", t.name, d.name)))?;
            map.push(coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
        }
        action.push(map);
    }
    let labels = traces.iter().map(|t| t.name.clone()).collect();
    let parities = traces.iter().map(|t| functional_parity(b_alg, t)).collect::<Result<_, _>>()?;
    let mut m = RightModule::new(lr, "partial_traces", labels, parities, action, None)?;
    m.functionals = Some(traces);
    Ok(m)
}

/// Trace module spanned by the given functionals, for algebras where the
/// trace space is not computed (e.g. countable bases).
pub fn trace_module_from(b_alg: &BasedSuperAlgebra, traces: Vec<PartialTrace>, lr: &SuperLieRinehart) -> Result<RightModule, LrError> {
    let support: Vec<BasisId> = traces.iter().flat_map(|t| t.values.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let backend = b_alg.backend();
    let dense = |f: &BTreeMap<BasisId, Scalar>, ids: &[BasisId]| -> Vec<Scalar> {
        ids.iter().map(|id| f.get(id).cloned().unwrap_or_else(|| Scalar::zero(backend))).collect()
    };
    let mut action = Vec::with_capacity(lr.rank());
    for g in 0..lr.rank() {
        let d = lr.action(g).ok_or_else(|| LrError::Module(format!("generator {} has no action", lr.generators()[g].name)))?;
        let mut map = Vec::with_capacity(traces.len());
        for t in &traces {
            let pulled = d.pullback(b_alg, &t.values)?;
            let mut ids = support.clone();
            ids.extend(pulled.keys().filter(|k| !support.contains(k)));
            let table: Vec<Vec<Scalar>> = traces.iter().map(|s| dense(&s.values, &ids)).collect();
            let coords = coordinates_in_span(&dense(&pulled, &ids), &table)?
                .ok_or_else(|| LrError::NotWellDefined(format!("{}·{} leaves the span of the given traces", t.name, d.name)))?;
            map.push(coords.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
        }
        action.push(map);
    }
    let labels = traces.iter().map(|t| t.name.clone()).collect();
    let parities = traces.iter().map(|t| functional_parity(b_alg, t)).collect::<Result<_, _>>()?;
    let mut m = RightModule::new(lr, "partial_traces", labels, parities, action, None)?;
    m.functionals = Some(traces);
    Ok(m)
}
