//! Structure constants of finite-dimensional Lie algebras.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::Deserialize;

use super::LieError;
use crate::expr::{parse, parse_rational, Expr, Rat, Resolver, Symbol, Unresolved};

/// `C^k_ij` with `[e_i, e_j] = Σ_k C^k_ij e_k`, stored for `i < j`.
/// Indices are 1-based in the public API.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    c: BTreeMap<(usize, usize, usize), Rat>,
}

impl StructureConstants {
    pub fn new(dim: usize) -> StructureConstants {
        StructureConstants { dim, c: BTreeMap::new() }
    }

    pub fn abelian(dim: usize) -> StructureConstants {
        Self::new(dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets `C^k_ij`; `i > j` stores `-c` under `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, c: Rat) -> Result<(), LieError> {
        let n = self.dim;
        if i == 0 || j == 0 || k == 0 || i > n || j > n || k > n {
            return Err(LieError::Input(format!("bracket index ({i},{j},{k}) outside 1..={n}")));
        }
        if i == j {
            return Err(LieError::Input(format!("bracket [e{i}, e{i}] must vanish")));
        }
        let (key, v) = if i < j { ((i, j, k), c) } else { ((j, i, k), -c) };
        if v.is_zero() {
            self.c.remove(&key);
        } else {
            self.c.insert(key, v);
        }
        Ok(())
    }

    /// Builder form of [`set`](Self::set) for literal tables.
    pub fn with(mut self, i: usize, j: usize, k: usize, c: Rat) -> StructureConstants {
        self.set(i, j, k, c).expect("valid bracket index");
        self
    }

    /// `C^k_ij` for any ordering of `i`, `j`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Rat {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.c.get(&(i, j, k)).cloned().unwrap_or_default(),
            Greater => -self.c.get(&(j, i, k)).cloned().unwrap_or_default(),
            Equal => Rat::zero(),
        }
    }

    /// Non-zero entries `(i, j, k, C^k_ij)` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rat)> {
        self.c.iter().map(|(&(i, j, k), v)| (i, j, k, v))
    }

    /// Matrix of `ad_{e_a}` (1-based `a`), acting on coefficient columns:
    /// entry `(k, j)` is `C^k_aj`, 0-based.
    pub fn ad(&self, a: usize) -> Vec<Vec<Rat>> {
        let n = self.dim;
        (1..=n).map(|k| (1..=n).map(|j| self.get(a, j, k)).collect()).collect()
    }

    /// Checks the Jacobi identity exactly over all quadruples.
    pub fn validate(&self) -> Result<(), LieError> {
        let n = self.dim;
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let mut s = Rat::zero();
                        for m in 1..=n {
                            s += self.get(i, j, m) * self.get(m, k, l)
                                + self.get(j, k, m) * self.get(m, i, l)
                                + self.get(k, i, m) * self.get(m, j, l);
                        }
                        if !s.is_zero() {
                            return Err(LieError::JacobiViolation { i, j, k, l });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Human-readable non-zero brackets, e.g. `[e1,e2] = e3`.
    pub fn describe(&self) -> Vec<String> {
        let mut grouped: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
        for (i, j, k, c) in self.entries() {
            grouped.entry((i, j)).or_default().push((k, c.clone()));
        }
        grouped
            .into_iter()
            .map(|((i, j), terms)| {
                let rhs = Expr::add(
                    terms.into_iter().map(|(k, c)| Expr::num(c) * Expr::sym(&Symbol::base(&format!("e{k}")))),
                );
                format!("[e{i},e{j}] = {rhs}")
            })
            .collect()
    }

    /// Parses the JSON algebra format.  Bracket coefficients may be rational
    /// or decimal strings, or expressions in the declared parameters.
    pub fn from_json(text: &str) -> Result<(StructureConstants, BTreeMap<String, Rat>), LieError> {
        let file: AlgebraFile = serde_json::from_str(text).map_err(|e| LieError::Input(e.to_string()))?;
        let mut params = BTreeMap::new();
        for (name, v) in &file.params {
            let r = json_rational(v).ok_or_else(|| LieError::Input(format!("parameter `{name}` is not rational")))?;
            params.insert(name.clone(), r);
        }
        Ok((Self::from_file(&file, &params)?, params))
    }

    fn from_file(file: &AlgebraFile, params: &BTreeMap<String, Rat>) -> Result<StructureConstants, LieError> {
        if file.dim == 0 || file.dim > 4 {
            return Err(LieError::Input(format!("dimension {} outside 1..=4", file.dim)));
        }
        let mut sc = StructureConstants::new(file.dim);
        let resolver = ParamResolver(params.keys().map(|k| (k.clone(), Symbol::param(k))).collect());
        for b in &file.brackets {
            if b.i >= b.j {
                return Err(LieError::Input(format!("bracket ({}, {}) must have i < j", b.i, b.j)));
            }
            for t in &b.terms {
                let c = match &t.c {
                    serde_json::Value::String(s) => match parse_rational(s) {
                        Some(r) => r,
                        None => eval_param_expr(s, &resolver, params)?,
                    },
                    v => json_rational(v).ok_or_else(|| LieError::Input(format!("bad coefficient {v}")))?,
                };
                let prev = sc.get(b.i, b.j, t.k);
                sc.set(b.i, b.j, t.k, prev + c)?;
            }
        }
        Ok(sc)
    }
}

fn json_rational(v: &serde_json::Value) -> Option<Rat> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        _ => None,
    }
}

struct ParamResolver(HashMap<String, Symbol>);

impl Resolver for ParamResolver {
    fn resolve(&self, ident: &str) -> Result<Symbol, Unresolved> {
        self.0.get(ident).cloned().ok_or(Unresolved::Unknown)
    }
}

fn eval_param_expr(s: &str, resolver: &ParamResolver, params: &BTreeMap<String, Rat>) -> Result<Rat, LieError> {
    let e = parse(s, resolver).map_err(|e| LieError::Input(format!("coefficient `{s}`: {e}")))?;
    let bindings = resolver.0.iter().map(|(k, sym)| (sym.clone(), Expr::num(params[k].clone()))).collect();
    e.substitute(&bindings)
        .as_num()
        .cloned()
        .ok_or_else(|| LieError::Input(format!("coefficient `{s}` does not reduce to a rational")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    dim: usize,
    #[serde(default)]
    brackets: Vec<BracketSpec>,
    #[serde(default)]
    params: BTreeMap<String, serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BracketSpec {
    i: usize,
    j: usize,
    terms: Vec<TermSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    k: usize,
    c: serde_json::Value,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{rat, rat_int};

    fn so3() -> StructureConstants {
        StructureConstants::new(3).with(1, 2, 3, rat_int(1)).with(2, 3, 1, rat_int(1)).with(1, 3, 2, rat_int(-1))
    }

    /// Independent Jacobi check written against the bracket of coefficient
    /// vectors rather than the index formula.
    fn jacobi_by_brackets(sc: &StructureConstants) -> bool {
        let n = sc.dim();
        let br = |x: &[Rat], y: &[Rat]| -> Vec<Rat> {
            let mut out = vec![Rat::zero(); n];
            for a in 0..n {
                for b in 0..n {
                    for (k, o) in out.iter_mut().enumerate() {
                        *o += &x[a] * &y[b] * sc.get(a + 1, b + 1, k + 1);
                    }
                }
            }
            out
        };
        let e = |i: usize| -> Vec<Rat> { (0..n).map(|k| if k == i { rat_int(1) } else { Rat::zero() }).collect() };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let a = br(&e(i), &br(&e(j), &e(k)));
                    let b = br(&e(j), &br(&e(k), &e(i)));
                    let c = br(&e(k), &br(&e(i), &e(j)));
                    if (0..n).any(|m| !(&a[m] + &b[m] + &c[m]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn so3_is_valid() {
        assert_eq!(so3().validate(), Ok(()));
        assert!(jacobi_by_brackets(&so3()));
    }

    #[test]
    fn abelian_is_valid() {
        assert_eq!(StructureConstants::abelian(3).validate(), Ok(()));
    }

    #[test]
    fn sign_flipped_so3_agrees_with_bracket_oracle() {
        let flipped = StructureConstants::new(3).with(1, 2, 3, rat_int(1)).with(2, 3, 1, rat_int(1)).with(1, 3, 2, rat_int(1));
        assert_eq!(flipped.validate().is_ok(), jacobi_by_brackets(&flipped));
        assert!(flipped.validate().is_ok());
    }

    #[test]
    fn jacobi_violation_reports_quadruple() {
        let bad = StructureConstants::new(3).with(1, 2, 1, rat_int(1)).with(1, 3, 1, rat_int(1)).with(2, 3, 2, rat_int(1));
        assert!(!jacobi_by_brackets(&bad));
        assert!(matches!(bad.validate(), Err(LieError::JacobiViolation { .. })));
    }

    #[test]
    fn antisymmetric_access() {
        let sc = so3();
        assert_eq!(sc.get(2, 1, 3), rat_int(-1));
        assert_eq!(sc.get(3, 1, 2), rat_int(1));
        assert_eq!(sc.ad(1)[2][1], rat_int(1));
    }

    #[test]
    fn json_with_parameters() {
        let text = r#"{"dim":3,"brackets":[{"i":1,"j":3,"terms":[{"k":1,"c":"1"}]},{"i":2,"j":3,"terms":[{"k":2,"c":"h"}]}],"params":{"h":"1/2"}}"#;
        let (sc, params) = StructureConstants::from_json(text).unwrap();
        assert_eq!(params["h"], rat(1, 2));
        assert_eq!(sc.get(2, 3, 2), rat(1, 2));
        assert_eq!(sc.get(3, 1, 1), rat_int(-1));
        assert!(StructureConstants::from_json(r#"{"dim":2,"brackets":[{"i":2,"j":1,"terms":[]}]}"#).is_err());
        assert!(StructureConstants::from_json(r#"{"dim":2,"brackets":[{"i":1,"j":2,"terms":[{"k":1,"c":"q"}]}]}"#).is_err());
    }

    #[test]
    fn describe_brackets() {
        assert_eq!(so3().describe(), vec!["[e1,e2] = e3", "[e1,e3] = -e2", "[e2,e3] = e1"]);
    }
}
