//! Second-order jet spaces, total derivatives and prolongation.

use std::collections::HashMap;

use thiserror::Error;

use crate::expr::{rat, Expr, Resolver, Symbol, Unresolved};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("total derivative would exceed jet order 2 (input contains `{0}`)")]
    OrderOverflow(String),
    #[error("vector fields live on different coordinates")]
    ContextMismatch,
}

/// Jet space of order 2 for one dependent variable over `coords`.
#[derive(Debug, Clone)]
pub struct JetSpace {
    coords: Vec<Symbol>,
    dep: String,
    params: Vec<Symbol>,
    jets: HashMap<Vec<usize>, Symbol>,
}

impl JetSpace {
    pub fn new(coords: &[&str], dep: &str) -> JetSpace {
        let coords: Vec<Symbol> = coords.iter().map(|c| Symbol::base(c)).collect();
        let mut jets = HashMap::new();
        let n = coords.len();
        let mut name = |idx: Vec<usize>| {
            let suffix: String = idx.iter().map(|&i| coords[i].name()).collect();
            let label = if idx.is_empty() { dep.to_string() } else { format!("{dep}_{suffix}") };
            jets.insert(idx.clone(), Symbol::jet(&label, dep, idx));
        };
        name(vec![]);
        for a in 0..n {
            name(vec![a]);
            for b in a..n {
                name(vec![a, b]);
            }
        }
        JetSpace { coords, dep: dep.to_string(), params: Vec::new(), jets }
    }

    pub fn with_params(mut self, names: &[&str]) -> JetSpace {
        self.params.extend(names.iter().map(|p| Symbol::param(p)));
        self
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Symbol {
        &self.coords[i]
    }

    pub fn coord_expr(&self, i: usize) -> Expr {
        Expr::sym(&self.coords[i])
    }

    pub fn coord_index(&self, s: &Symbol) -> Option<usize> {
        self.coords.iter().position(|c| c == s)
    }

    pub fn dep_name(&self) -> &str {
        &self.dep
    }

    pub fn dep(&self) -> Symbol {
        self.jet(&[])
    }

    pub fn dep_expr(&self) -> Expr {
        Expr::sym(&self.dep())
    }

    /// Jet variable for a multi-index of coordinate positions (any order).
    ///
    /// # Panics
    /// If the index has length above 2 or refers to a missing coordinate.
    pub fn jet(&self, idx: &[usize]) -> Symbol {
        let mut key = idx.to_vec();
        key.sort_unstable();
        self.jets[&key].clone()
    }

    pub fn jet_expr(&self, idx: &[usize]) -> Expr {
        Expr::sym(&self.jet(idx))
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    /// Coordinates of the jet space: base coordinates, the dependent
    /// variable, first and then second derivatives.
    pub fn all_symbols(&self) -> Vec<Symbol> {
        let n = self.n();
        let mut out = self.coords.clone();
        out.push(self.dep());
        out.extend((0..n).map(|a| self.jet(&[a])));
        for a in 0..n {
            for b in a..n {
                out.push(self.jet(&[a, b]));
            }
        }
        out
    }

    fn jet_index(&self, s: &Symbol) -> Option<Vec<usize>> {
        match s.kind() {
            crate::expr::SymbolKind::Jet { dep, idx } if dep == &self.dep && idx.iter().all(|&i| i < self.n()) => {
                (self.jets.get(idx) == Some(s)).then(|| idx.clone())
            }
            _ => None,
        }
    }

    /// `D_a e` for `e` of order at most 1.
    pub fn total_derivative(&self, e: &Expr, a: usize) -> Result<Expr, JetError> {
        let mut terms = vec![e.diff(&self.coords[a])];
        for s in e.symbols() {
            let Some(idx) = self.jet_index(&s) else { continue };
            if idx.len() >= 2 {
                return Err(JetError::OrderOverflow(s.name().to_string()));
            }
            let mut next = idx.clone();
            next.push(a);
            terms.push(self.jet_expr(&next) * e.diff(&s));
        }
        Ok(Expr::add(terms))
    }

    /// `η̂ e = Σ η^j D_j e`.
    pub fn eta_hat_apply(&self, eta: &VectorField, e: &Expr) -> Result<Expr, JetError> {
        let mut terms = Vec::new();
        for (v, c) in eta.vars.iter().zip(&eta.coeffs) {
            if c.is_zero() {
                continue;
            }
            let j = self.coord_index(v).ok_or(JetError::ContextMismatch)?;
            terms.push(c * self.total_derivative(e, j)?);
        }
        Ok(Expr::add(terms))
    }

    /// `u_(i) = η̂_i u` and `u_(ij) = ½(η̂_i η̂_j + η̂_j η̂_i) u`.
    pub fn symmetrized_invariant(&self, etas: &[VectorField], idx: &[usize]) -> Result<Expr, JetError> {
        let u = self.dep_expr();
        match *idx {
            [i] => self.eta_hat_apply(&etas[i], &u),
            [i, j] => {
                let ij = self.eta_hat_apply(&etas[i], &self.eta_hat_apply(&etas[j], &u)?)?;
                if i == j {
                    return Ok(ij);
                }
                let ji = self.eta_hat_apply(&etas[j], &self.eta_hat_apply(&etas[i], &u)?)?;
                Ok(Expr::num(rat(1, 2)) * (ij + ji))
            }
            _ => panic!("symmetrized invariants have one or two indices"),
        }
    }

    /// Second prolongation of a point field whose variables are drawn from
    /// the coordinates and the dependent variable.
    pub fn prolong2(&self, x: &VectorField) -> Result<ProlongedField, JetError> {
        let n = self.n();
        let dep = self.dep();
        let mut xi = vec![Expr::zero(); n];
        let mut theta = Expr::zero();
        for (v, c) in x.vars.iter().zip(&x.coeffs) {
            if *v == dep {
                theta = c.clone();
            } else {
                let i = self.coord_index(v).ok_or(JetError::ContextMismatch)?;
                xi[i] = c.clone();
            }
        }
        let mut dxi = vec![vec![Expr::zero(); n]; n];
        for (b, row) in dxi.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                *slot = self.total_derivative(&xi[c], b)?;
            }
        }
        let mut phi1 = Vec::with_capacity(n);
        for a in 0..n {
            let mut terms = vec![self.total_derivative(&theta, a)?];
            for b in 0..n {
                terms.push(-(self.jet_expr(&[b]) * &dxi[a][b]));
            }
            phi1.push(Expr::add(terms));
        }
        let mut phi2 = Vec::new();
        for a in 0..n {
            for b in a..n {
                let mut terms = vec![self.total_derivative(&phi1[a], b)?];
                for c in 0..n {
                    terms.push(-(self.jet_expr(&[a, c]) * &dxi[b][c]));
                }
                phi2.push(((a, b), Expr::add(terms)));
            }
        }
        Ok(ProlongedField { space: self.clone(), xi, theta, phi1, phi2 })
    }
}

impl Resolver for JetSpace {
    fn resolve(&self, ident: &str) -> Result<Symbol, Unresolved> {
        if ident == self.dep {
            return Ok(self.dep());
        }
        if let Some(c) = self.coords.iter().find(|c| c.name() == ident) {
            return Ok(c.clone());
        }
        if let Some(p) = self.params.iter().find(|p| p.name() == ident) {
            return Ok(p.clone());
        }
        let Some(suffix) = ident.strip_prefix(&self.dep).and_then(|r| r.strip_prefix('_')) else {
            return Err(Unresolved::Unknown);
        };
        let idx = self.split_suffix(suffix).ok_or(Unresolved::MalformedJetIndex)?;
        if idx.is_empty() || idx.len() > 2 {
            return Err(Unresolved::MalformedJetIndex);
        }
        Ok(self.jet(&idx))
    }
}

impl JetSpace {
    /// Splits a suffix such as `xy` or `x1x2` into coordinate positions,
    /// taking the shortest decomposition.
    fn split_suffix(&self, s: &str) -> Option<Vec<usize>> {
        let n = s.len();
        let mut best: Vec<Option<Vec<usize>>> = vec![None; n + 1];
        best[0] = Some(Vec::new());
        for end in 1..=n {
            for (i, c) in self.coords.iter().enumerate() {
                let name = c.name();
                if name.len() > end || !s.is_char_boundary(end - name.len()) || &s[end - name.len()..end] != name {
                    continue;
                }
                if let Some(prev) = &best[end - name.len()] {
                    if best[end].as_ref().is_none_or(|b| b.len() > prev.len() + 1) {
                        let mut v = prev.clone();
                        v.push(i);
                        best[end] = Some(v);
                    }
                }
            }
        }
        best.pop().flatten()
    }
}

/// First-order differential operator `Σ coeffs[i] ∂/∂vars[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub vars: Vec<Symbol>,
    pub coeffs: Vec<Expr>,
}

impl VectorField {
    pub fn new(vars: Vec<Symbol>, coeffs: Vec<Expr>) -> VectorField {
        assert_eq!(vars.len(), coeffs.len());
        VectorField { vars, coeffs }
    }

    /// The coordinate field `∂/∂vars[i]`.
    pub fn unit(vars: &[Symbol], i: usize) -> VectorField {
        let coeffs = (0..vars.len()).map(|k| if k == i { Expr::one() } else { Expr::zero() }).collect();
        VectorField::new(vars.to_vec(), coeffs)
    }

    pub fn apply(&self, f: &Expr) -> Expr {
        Expr::add(
            self.vars
                .iter()
                .zip(&self.coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(v, c)| c * f.diff(v))
                .collect::<Vec<_>>(),
        )
    }

    pub fn commutator(&self, other: &VectorField) -> Result<VectorField, JetError> {
        if self.vars != other.vars {
            return Err(JetError::ContextMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| self.apply(y) - other.apply(x)).collect();
        Ok(VectorField::new(self.vars.clone(), coeffs))
    }

    pub fn scale(&self, c: &Expr) -> VectorField {
        VectorField::new(self.vars.clone(), self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        VectorField::new(self.vars.clone(), coeffs)
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> VectorField {
        VectorField::new(self.vars.clone(), self.coeffs.iter().map(f).collect())
    }

    /// Renders as `c1*d/dz1 + ...` with zero components omitted.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| if c.is_one() { format!("d_{v}") } else { format!("({c})*d_{v}") })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// A point field together with its first and second prolongation
/// coefficients.
#[derive(Debug, Clone)]
pub struct ProlongedField {
    space: JetSpace,
    pub xi: Vec<Expr>,
    pub theta: Expr,
    pub phi1: Vec<Expr>,
    /// `φ_ab` for `a <= b`.
    pub phi2: Vec<((usize, usize), Expr)>,
}

impl ProlongedField {
    pub fn phi2(&self, a: usize, b: usize) -> &Expr {
        let key = (a.min(b), a.max(b));
        &self.phi2.iter().find(|(k, _)| *k == key).expect("index within jet space").1
    }

    /// `pr²X · f`.
    pub fn apply(&self, f: &Expr) -> Expr {
        let s = &self.space;
        let mut terms = Vec::new();
        let mut push = |c: &Expr, v: &Symbol| {
            if !c.is_zero() {
                let d = f.diff(v);
                if !d.is_zero() {
                    terms.push(c * d);
                }
            }
        };
        for (a, c) in self.xi.iter().enumerate() {
            push(c, s.coord(a));
        }
        push(&self.theta, &s.dep());
        for (a, c) in self.phi1.iter().enumerate() {
            push(c, &s.jet(&[a]));
        }
        for ((a, b), c) in &self.phi2 {
            push(c, &s.jet(&[*a, *b]));
        }
        Expr::add(terms)
    }
}
