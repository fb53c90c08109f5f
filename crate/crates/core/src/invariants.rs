//! Differential invariants and invariant quasi-linear templates for groups
//! acting freely: intransitively on `x` (type I) or simply transitively on
//! `(x, u)` (type II).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::expr::normal::normal;
use crate::expr::{is_zero, Bindings, Expr, Head, Rat, SamplerConfig, Symbol, ZeroTestError};
use crate::jet::{JetError, JetSpace, ProlongedField, VectorField};
use crate::liealg::{det_check, CatalogEntry, InvariantFields};
use crate::verify::{annihilation_check, functional_rank};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("`{label}` still depends on `{symbol}` after substitution")]
    ResidualDependence { label: String, symbol: String },
    #[error("generators are not independent at sampled points")]
    SingularRealization,
    #[error("{0} has no simply transitive chart (dimension must be at least 2)")]
    NoChart(String),
    #[error("at least one invariant coordinate is required (m >= 1)")]
    BadInvariantCount,
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Sampling(#[from] ZeroTestError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pipeline {
    /// Free intransitive action on the independent variables.
    #[serde(rename = "I")]
    Free,
    /// Simply transitive action on independent and dependent variables.
    #[serde(rename = "II")]
    Transitive,
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Free => "I",
            Pipeline::Transitive => "II",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Labeled {
    pub label: String,
    pub expr: Expr,
}

fn labeled(label: impl Into<String>, expr: Expr) -> Labeled {
    Labeled { label: label.into(), expr }
}

#[derive(Debug, Clone)]
pub struct InvariantSet {
    pub algebra: String,
    pub params: BTreeMap<String, Rat>,
    pub pipeline: Pipeline,
    pub space: JetSpace,
    /// The symmetry generators as point fields on `space`.
    pub generators: Vec<VectorField>,
    pub invariants: Vec<Labeled>,
    /// Which invariants are of order at most one (template arguments).
    pub arguments: Vec<usize>,
    pub verification: Option<Verification>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub annihilated: bool,
    pub rank: usize,
    pub expected_rank: usize,
}

impl Verification {
    pub fn pass(&self) -> bool {
        self.annihilated && self.rank == self.expected_rank
    }
}

impl InvariantSet {
    pub fn exprs(&self) -> Vec<Expr> {
        self.invariants.iter().map(|l| l.expr.clone()).collect()
    }

    pub fn prolonged(&self) -> Result<Vec<ProlongedField>, InvariantError> {
        self.generators.iter().map(|x| self.space.prolong2(x).map_err(Into::into)).collect()
    }

    /// Dimension of the order-2 jet space minus the group dimension.
    pub fn expected_count(&self) -> usize {
        let k = self.space.n();
        let jet_dim = k + 1 + k + k * (k + 1) / 2;
        jet_dim - self.generators.len()
    }

    /// Annihilation by every prolonged generator plus a functional rank
    /// test; the result is stored on the set.
    pub fn verify(&mut self, cfg: &SamplerConfig) -> Result<&Verification, InvariantError> {
        let pro = self.prolonged()?;
        let exprs = self.exprs();
        let mut annihilated = true;
        for e in &exprs {
            if !annihilation_check(&pro, e, cfg)? {
                annihilated = false;
                break;
            }
        }
        let rank = functional_rank(&exprs, &self.space, cfg)?;
        self.verification = Some(Verification { annihilated, rank, expected_rank: exprs.len() });
        Ok(self.verification.as_ref().expect("just set"))
    }

    pub fn verified(&self) -> bool {
        self.verification.as_ref().is_some_and(Verification::pass)
    }
}

/// An invariant equation linear in second derivatives with arbitrary
/// functions of the first-order invariants.
#[derive(Debug, Clone)]
pub struct PDETemplate {
    pub pipeline: Pipeline,
    /// The equation written over invariant labels.
    pub display: Expr,
    /// The equation over the jet space.
    pub lhs: Expr,
    /// Arbitrary-function heads and their arity.
    pub heads: Vec<(String, usize)>,
}

fn label_sym(label: &str) -> Expr {
    Expr::sym(&Symbol::param(label))
}

/// `Σ slot_k(args) · second_k + rest(args)`, with the first slot fixed to 1.
fn linear_template(
    pipeline: Pipeline,
    inv: &InvariantSet,
    second: &[(String, usize)],
    free_head: &str,
) -> PDETemplate {
    let args: Vec<Expr> = inv.arguments.iter().map(|&i| inv.invariants[i].expr.clone()).collect();
    let arg_labels: Vec<Expr> = inv.arguments.iter().map(|&i| label_sym(&inv.invariants[i].label)).collect();
    let mut lhs = Vec::new();
    let mut display = Vec::new();
    let mut heads = Vec::new();
    for (k, (head, idx)) in second.iter().enumerate() {
        let e = inv.invariants[*idx].expr.clone();
        let l = label_sym(&inv.invariants[*idx].label);
        if k == 0 {
            lhs.push(e);
            display.push(l);
        } else {
            lhs.push(Expr::apply(Head::new(head), args.clone()) * e);
            display.push(Expr::apply(Head::new(head), arg_labels.clone()) * l);
            heads.push((head.clone(), args.len()));
        }
    }
    lhs.push(Expr::apply(Head::new(free_head), args.clone()));
    display.push(Expr::apply(Head::new(free_head), arg_labels));
    heads.push((free_head.to_string(), args.len()));
    PDETemplate { pipeline, display: Expr::add(display), lhs: Expr::add(lhs), heads }
}

fn coord_names(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|k| format!("{prefix}{k}")).collect()
}

/// Type I: `x1..xn` carry the free action, `y1..y(m-1)` are invariant and
/// `u` plays the role of `y^m`.
pub fn type1_pipeline(entry: &CatalogEntry, m: usize, cfg: &SamplerConfig) -> Result<(InvariantSet, PDETemplate), InvariantError> {
    if m == 0 {
        return Err(InvariantError::BadInvariantCount);
    }
    let fields = entry.type1_fields();
    if !det_check(&fields.xi, cfg, 16) {
        return Err(InvariantError::SingularRealization);
    }
    let n = entry.dim();
    let xs = coord_names("x", n);
    let ys = coord_names("y", m - 1);
    let names: Vec<&str> = xs.iter().chain(&ys).map(String::as_str).collect();
    let space = JetSpace::new(&names, "u");
    let y = |mu: usize| n + mu;
    let mut inv = Vec::new();
    for (mu, name) in ys.iter().enumerate() {
        inv.push(labeled(name.clone(), space.coord_expr(y(mu))));
    }
    inv.push(labeled("u", space.dep_expr()));
    for (mu, name) in ys.iter().enumerate() {
        inv.push(labeled(format!("u_{name}"), space.jet_expr(&[y(mu)])));
    }
    let mut first = Vec::new();
    for i in 0..n {
        let e = normal(&space.symmetrized_invariant(&fields.eta, &[i])?);
        first.push(e.clone());
        inv.push(labeled(format!("u_({})", i + 1), e));
    }
    let arguments: Vec<usize> = (0..inv.len()).collect();
    let mut second = Vec::new();
    for mu in 0..ys.len() {
        for nu in mu..ys.len() {
            second.push((format!("a_{}{}", mu + 1, nu + 1), inv.len()));
            inv.push(labeled(format!("u_{}{}", ys[mu], ys[nu]), space.jet_expr(&[y(mu), y(nu)])));
        }
    }
    let mut mixed = Vec::new();
    for (i, f) in first.iter().enumerate() {
        for (mu, name) in ys.iter().enumerate() {
            mixed.push((format!("c_{}{}", mu + 1, i + 1), inv.len()));
            inv.push(labeled(format!("u_({}){name}", i + 1), normal(&space.total_derivative(f, y(mu))?)));
        }
    }
    let mut sym = Vec::new();
    for i in 0..n {
        for j in i..n {
            sym.push((format!("b_{}{}", i + 1, j + 1), inv.len()));
            let e = normal(&space.symmetrized_invariant(&fields.eta, &[i, j])?);
            inv.push(labeled(format!("u_({}{})", i + 1, j + 1), e));
        }
    }
    let generators = fields.xi.iter().map(|x| VectorField::new(space.coords()[..n].to_vec(), x.coeffs.clone())).collect();
    let set = InvariantSet {
        algebra: entry.name.to_string(),
        params: entry.params.clone(),
        pipeline: Pipeline::Free,
        space,
        generators,
        invariants: inv,
        arguments,
        verification: None,
    };
    // The u_(11) coefficient is normalised to one.
    let mut slots = sym;
    slots.extend(second);
    slots.extend(mixed);
    let template = linear_template(Pipeline::Free, &set, &slots, "d");
    Ok((set, template))
}

/// Coordinates `(x, u)` split from the chart, with `w` as the covariant
/// dependent variable.
#[derive(Debug, Clone)]
pub struct Splitting {
    pub w: JetSpace,
    pub u: JetSpace,
    /// Position of `u` among the chart coordinates.
    pub dependent: usize,
}

impl Splitting {
    /// The `(x, u)` space lists the independent coordinates in sorted
    /// order, whatever their position in the chart.
    pub fn new(chart: &[&str]) -> Splitting {
        let dependent = chart.iter().position(|c| *c == "u").expect("chart contains u");
        let w = JetSpace::new(chart, "w");
        let mut xs: Vec<&str> = chart.iter().copied().filter(|c| *c != "u").collect();
        xs.sort_unstable();
        Splitting { w, u: JetSpace::new(&xs, "u"), dependent }
    }

    fn upos(&self, a: usize) -> usize {
        self.u.coord_index(self.w.coord(a)).expect("independent chart coordinate")
    }

    /// Inverse implicit-derivative substitution `w_a = -u_a w_n`,
    /// `w_ab = -w_n u_ab - w_bn u_a - w_an u_b - u_a u_b w_nn`, together with
    /// the renaming of the coordinate `u` to the dependent variable.
    pub fn epod(&self, e: &Expr) -> Expr {
        let (w, u, n) = (&self.w, &self.u, self.dependent);
        let wn = w.jet_expr(&[n]);
        let wnn = w.jet_expr(&[n, n]);
        let ua = |a: usize| u.jet_expr(&[self.upos(a)]);
        let mut b = Bindings::new();
        b.insert(w.coord(n).clone(), u.dep_expr());
        let others: Vec<usize> = (0..w.n()).filter(|&a| a != n).collect();
        for &a in &others {
            b.insert(w.jet(&[a]), -(ua(a) * &wn));
            for &c in others.iter().filter(|&&c| c >= a) {
                let e = -(&wn * u.jet_expr(&[self.upos(a), self.upos(c)]))
                    - w.jet_expr(&[c, n]) * ua(a)
                    - w.jet_expr(&[a, n]) * ua(c)
                    - ua(a) * ua(c) * &wnn;
                b.insert(w.jet(&[a, c]), e);
            }
        }
        e.substitute(&b)
    }

    fn unnecessary(&self) -> Vec<Symbol> {
        let n = self.dependent;
        let mut out = vec![self.w.jet(&[n]), self.w.jet(&[n, n])];
        out.extend((0..self.w.n()).filter(|&a| a != n).map(|a| self.w.jet(&[a, n])));
        out
    }

    /// Checks that the inputs do not depend on `w_n`, `w_an`, `w_nn`, sets
    /// them to `1, 0, 0` and requires that no `w` symbol survives.
    pub fn eliminate_w(&self, items: &[Labeled], cfg: &SamplerConfig) -> Result<Vec<Labeled>, InvariantError> {
        let unnecessary = self.unnecessary();
        let mut fix = Bindings::new();
        for (k, s) in unnecessary.iter().enumerate() {
            fix.insert(s.clone(), if k == 0 { Expr::one() } else { Expr::zero() });
        }
        let mut out = Vec::with_capacity(items.len());
        for item in items {
            for s in &unnecessary {
                if item.expr.contains(s) && !is_zero(&item.expr.diff(s), cfg)? {
                    return Err(InvariantError::ResidualDependence { label: item.label.clone(), symbol: s.name().into() });
                }
            }
            let e = normal(&item.expr.substitute(&fix));
            if let Some(s) = e.symbols().into_iter().find(|s| matches!(s.kind(), crate::expr::SymbolKind::Jet { dep, .. } if dep == "w")) {
                return Err(InvariantError::ResidualDependence { label: item.label.clone(), symbol: s.name().into() });
            }
            out.push(labeled(item.label.clone(), e));
        }
        Ok(out)
    }

    /// Moves a field over the chart coordinates to the `(x, u)` jet space.
    pub fn point_field(&self, f: &VectorField) -> VectorField {
        let mut b = Bindings::new();
        b.insert(self.w.coord(self.dependent).clone(), self.u.dep_expr());
        let vars = (0..self.w.n())
            .map(|a| if a == self.dependent { self.u.dep() } else { self.u.coord(self.upos(a)).clone() })
            .collect();
        VectorField::new(vars, f.coeffs.iter().map(|c| c.substitute(&b)).collect())
    }
}

/// Intermediate results of the transitive pipeline over the `w` jet space.
#[derive(Debug, Clone)]
pub struct TransitiveStages {
    pub splitting: Splitting,
    pub fields: InvariantFields,
    /// `w_(i)`.
    pub w_first: Vec<Expr>,
    /// `w_(ij)` for `i <= j`, row-major.
    pub w_second: Vec<((usize, usize), Expr)>,
    /// `I_(a)` and `I_(ij)`.
    pub raw: Vec<Labeled>,
}

impl TransitiveStages {
    pub fn w_second(&self, i: usize, j: usize) -> &Expr {
        let key = (i.min(j), i.max(j));
        &self.w_second.iter().find(|(k, _)| *k == key).expect("index in range").1
    }
}

pub fn transitive_stages(entry: &CatalogEntry) -> Result<TransitiveStages, InvariantError> {
    let chart = entry.chart.as_ref().ok_or_else(|| InvariantError::NoChart(entry.name.to_string()))?;
    let fields = entry.type2_fields().expect("chart present");
    let splitting = Splitting::new(&chart.names);
    let w = &splitting.w;
    let n = entry.dim();
    let w_first = (0..n).map(|i| w.symmetrized_invariant(&fields.eta, &[i]).map(|e| normal(&e))).collect::<Result<Vec<_>, _>>()?;
    let mut w_second = Vec::new();
    for i in 0..n {
        for j in i..n {
            w_second.push(((i, j), normal(&w.symmetrized_invariant(&fields.eta, &[i, j])?)));
        }
    }
    let mut stages = TransitiveStages { splitting, fields, w_first, w_second, raw: Vec::new() };
    let last = &stages.w_first[n - 1];
    let mut raw = Vec::new();
    for a in 0..n - 1 {
        raw.push(labeled(format!("v_{}", a + 1), &stages.w_first[a] / last));
    }
    for i in 0..n {
        for j in i + 1..n {
            let (wi, wj) = (&stages.w_first[i], &stages.w_first[j]);
            let num = wi.powi(2) * stages.w_second(j, j) - Expr::int(2) * wi * wj * stages.w_second(i, j)
                + wj.powi(2) * stages.w_second(i, i);
            raw.push(labeled(format!("v_{}{}", i + 1, j + 1), num / last.powi(3)));
        }
    }
    stages.raw = raw;
    Ok(stages)
}

/// Type II: steps from invariant fields through `I_(a)`, `I_(ij)` and the
/// inverse substitution to invariants of `(x, u)` and the template
/// `v_12 + Σ a_ij(v_a) v_ij + b(v_a)`.
pub fn type2_pipeline(entry: &CatalogEntry, cfg: &SamplerConfig) -> Result<(InvariantSet, PDETemplate), InvariantError> {
    let stages = transitive_stages(entry)?;
    let sp = &stages.splitting;
    let substituted: Vec<Labeled> = stages.raw.iter().map(|l| labeled(l.label.clone(), sp.epod(&l.expr))).collect();
    let invariants = sp.eliminate_w(&substituted, cfg)?;
    let n = entry.dim();
    let generators = stages.fields.xi.iter().map(|x| sp.point_field(x)).collect();
    let set = InvariantSet {
        algebra: entry.name.to_string(),
        params: entry.params.clone(),
        pipeline: Pipeline::Transitive,
        space: sp.u.clone(),
        generators,
        invariants,
        arguments: (0..n - 1).collect(),
        verification: None,
    };
    let mut slots = Vec::new();
    let mut k = n - 1;
    for i in 0..n {
        for j in i + 1..n {
            slots.push((format!("a_{}{}", i + 1, j + 1), k));
            k += 1;
        }
    }
    let template = linear_template(Pipeline::Transitive, &set, &slots, "b");
    Ok((set, template))
}

/// Runs the requested pipeline and verifies the result.
pub fn run_pipeline(
    entry: &CatalogEntry,
    pipeline: Pipeline,
    m: usize,
    cfg: &SamplerConfig,
) -> Result<(InvariantSet, PDETemplate), InvariantError> {
    let (mut set, template) = match pipeline {
        Pipeline::Free => type1_pipeline(entry, m, cfg)?,
        Pipeline::Transitive => type2_pipeline(entry, cfg)?,
    };
    set.verify(cfg)?;
    Ok((set, template))
}

/// Replaces every arbitrary function of the template by the given bodies;
/// each body refers to its arguments as the parameters `t1, t2, ...`.
pub fn instantiate(template: &PDETemplate, bodies: &[(String, Expr)]) -> Expr {
    let mut e = template.lhs.clone();
    for (name, body) in bodies {
        let arity = template.heads.iter().find(|(h, _)| h == name).map_or(0, |(_, a)| *a);
        let params: Vec<Symbol> = (1..=arity).map(|k| Symbol::param(&format!("t{k}"))).collect();
        e = e.instantiate(name, &params, body);
    }
    e
}

/// Random polynomial of degree at most two in `t1..tk` with integer
/// coefficients in `[-3, 3]`.
pub fn random_polynomial(rng: &mut impl rand::Rng, arity: usize) -> Expr {
    let t: Vec<Expr> = (1..=arity).map(|k| Expr::sym(&Symbol::param(&format!("t{k}")))).collect();
    let mut coeff = || Expr::int(rng.gen_range(-3..=3));
    let mut terms = vec![coeff()];
    for i in 0..arity {
        terms.push(coeff() * &t[i]);
        for j in i..arity {
            terms.push(coeff() * &t[i] * &t[j]);
        }
    }
    Expr::add(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::liealg::lookup;
    use crate::verify::equivalence_check;

    fn entry(name: &str) -> CatalogEntry {
        lookup(name, &BTreeMap::new()).unwrap()
    }

    fn exprs(space: &JetSpace, texts: &[&str]) -> Vec<Expr> {
        texts.iter().map(|t| normal(&parse(t, space).unwrap())).collect()
    }

    #[test]
    fn abelian_plane() {
        let cfg = SamplerConfig::default();
        let (set, t) = run_pipeline(&entry("2g1"), Pipeline::Transitive, 1, &cfg).unwrap();
        assert!(set.verified());
        assert_eq!(set.exprs(), exprs(&set.space, &["-u_x", "-u_xx"]));
        assert_eq!(t.display.to_string(), "v_12 + b(v_1)");
    }

    #[test]
    fn affine_line() {
        let cfg = SamplerConfig::default();
        let (set, _) = run_pipeline(&entry("g2"), Pipeline::Transitive, 1, &cfg).unwrap();
        assert!(set.verified());
        assert_eq!(set.exprs(), exprs(&set.space, &["-exp(u)*u_x", "-exp(2*u)*u_xx - exp(2*u)*u_x^2"]));
        let printed = exprs(&set.space, &["exp(u)*u_x", "exp(2*u)*u_xx"]);
        assert_eq!(equivalence_check(&set.exprs(), &printed, &set.space, &cfg), Ok(true));
    }

    #[test]
    fn raw_invariant_is_rejected() {
        let cfg = SamplerConfig::default();
        let stages = transitive_stages(&entry("g2")).unwrap();
        let raw = [labeled("w_(1)", stages.w_first[0].clone())];
        let err = stages.splitting.eliminate_w(&raw, &cfg).unwrap_err();
        assert!(matches!(err, InvariantError::ResidualDependence { .. }), "{err}");
    }

    #[test]
    fn free_affine_action() {
        let cfg = SamplerConfig::default();
        let (set, t) = run_pipeline(&entry("g2"), Pipeline::Free, 2, &cfg).unwrap();
        assert!(set.verified());
        assert_eq!(set.invariants.len(), set.expected_count());
        let u12 = set.invariants.iter().find(|l| l.label == "u_(12)").unwrap();
        assert_eq!(u12.expr, normal(&parse("exp(x2)*(u_x1x2 + u_x1/2)", &set.space).unwrap()));
        assert_eq!(t.heads.first().unwrap().0, "b_12");
    }

    #[test]
    fn counts_match_free_action() {
        let cfg = SamplerConfig::default();
        for name in ["g1", "3g1", "g3_3"] {
            for m in 1..=2 {
                let (set, _) = type1_pipeline(&entry(name), m, &cfg).unwrap();
                assert_eq!(set.invariants.len(), set.expected_count(), "{name} m={m}");
            }
        }
        let (set, _) = type2_pipeline(&entry("3g1"), &cfg).unwrap();
        assert_eq!(set.invariants.len(), set.expected_count());
        assert_eq!(set.expected_count(), 5);
    }

    #[test]
    fn so3_w_invariants_match_printed() {
        let s = transitive_stages(&entry("g3_7")).unwrap();
        let w = &s.splitting.w;
        let printed = [
            "w_x*cos(u)/cos(y) - w_y*sin(u) + w_u*cos(u)*tan(y)",
            "w_x*sin(u)/cos(y) + w_y*cos(u) + w_u*sin(u)*tan(y)",
            "w_u",
        ];
        for (got, want) in s.w_first.iter().zip(printed) {
            assert_eq!(got, &normal(&parse(want, w).unwrap()));
        }
        let w13 = "w_xu*cos(u)/cos(y) - w_yu*sin(u) + w_uu*cos(u)*tan(y) - w_x*sin(u)/(2*cos(y)) - w_y*cos(u)/2 - w_u*sin(u)*tan(y)/2";
        assert_eq!(s.w_second(0, 2), &normal(&parse(w13, w).unwrap()));
    }

    #[test]
    fn template_instantiation() {
        let cfg = SamplerConfig::default();
        let (set, t) = run_pipeline(&entry("g2"), Pipeline::Transitive, 1, &cfg).unwrap();
        let t1 = Expr::sym(&Symbol::param("t1"));
        let e = instantiate(&t, &[("b".to_string(), t1.powi(2))]);
        let want = &set.invariants[1].expr + set.invariants[0].expr.powi(2);
        assert_eq!(is_zero(&(e.clone() - want), &cfg), Ok(true));
        let pro = set.prolonged().unwrap();
        assert_eq!(annihilation_check(&pro, &e, &cfg), Ok(true));
    }
}
