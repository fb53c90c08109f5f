use std::collections::{BTreeSet, HashMap};

use num_traits::One;

use super::{Expr, Func, Head, Node, Rat, Symbol};

/// Simultaneous substitution map.
pub type Bindings = HashMap<Symbol, Expr>;

impl Expr {
    /// Partial derivative with every other symbol held fixed.
    ///
    /// Arbitrary-function heads differentiate into formal derivative heads
    /// (`b__d1` for the first slot) by the chain rule.
    pub fn diff(&self, s: &Symbol) -> Expr {
        if !self.contains(s) {
            return Expr::zero();
        }
        match self.node() {
            Node::Num(_) => Expr::zero(),
            Node::Sym(t) => {
                if t == s {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Add(ts) => Expr::add(ts.iter().map(|t| t.diff(s)).collect::<Vec<_>>()),
            Node::Mul(fs) => {
                let mut terms = Vec::with_capacity(fs.len());
                for (i, f) in fs.iter().enumerate() {
                    let d = f.diff(s);
                    if d.is_zero() {
                        continue;
                    }
                    let mut parts = fs.clone();
                    parts[i] = d;
                    terms.push(Expr::mul(parts));
                }
                Expr::add(terms)
            }
            Node::Pow(b, r) => {
                let db = b.diff(s);
                Expr::mul([Expr::num(r.clone()), Expr::pow(b, r - Rat::one()), db])
            }
            Node::Func(f, a) => {
                let da = a.diff(s);
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Log => a.recip(),
                    Func::Sin => Expr::cos(a.clone()),
                    Func::Cos => -Expr::sin(a.clone()),
                    Func::Tan => Expr::one() + Expr::tan(a.clone()).powi(2),
                };
                outer * da
            }
            Node::Apply(h, args) => {
                let mut terms = Vec::new();
                for (k, a) in args.iter().enumerate() {
                    let da = a.diff(s);
                    if da.is_zero() {
                        continue;
                    }
                    let mut dh = h.clone();
                    dh.derivs.push(k);
                    terms.push(Expr::apply(dh, args.clone()) * da);
                }
                Expr::add(terms)
            }
        }
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        match self.node() {
            Node::Num(_) => false,
            Node::Sym(t) => t == s,
            Node::Add(v) | Node::Mul(v) | Node::Apply(_, v) => v.iter().any(|c| c.contains(s)),
            Node::Pow(b, _) | Node::Func(_, b) => b.contains(s),
        }
    }

    pub fn contains_any(&self, syms: &[Symbol]) -> bool {
        syms.iter().any(|s| self.contains(s))
    }

    /// All symbols occurring in the tree, in canonical order.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self.node() {
            Node::Num(_) => {}
            Node::Sym(t) => {
                out.insert(t.clone());
            }
            Node::Add(v) | Node::Mul(v) | Node::Apply(_, v) => v.iter().for_each(|c| c.collect_symbols(out)),
            Node::Pow(b, _) | Node::Func(_, b) => b.collect_symbols(out),
        }
    }

    /// Highest jet order among the symbols (0 if none).
    pub fn jet_order(&self) -> usize {
        self.symbols().iter().filter_map(Symbol::jet_order).max().unwrap_or(0)
    }

    /// Jet symbols that occur inside a denominator (base of a negative power,
    /// or argument of `tan`/`log`).
    pub fn denominator_symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_denominators(false, &mut out);
        out
    }

    fn collect_denominators(&self, inside: bool, out: &mut BTreeSet<Symbol>) {
        match self.node() {
            Node::Num(_) => {}
            Node::Sym(t) => {
                if inside && t.is_jet() {
                    out.insert(t.clone());
                }
            }
            Node::Add(v) | Node::Mul(v) | Node::Apply(_, v) => {
                v.iter().for_each(|c| c.collect_denominators(inside, out))
            }
            Node::Pow(b, r) => b.collect_denominators(inside || r < &Rat::from_integer(0.into()), out),
            Node::Func(f, b) => b.collect_denominators(inside || matches!(f, Func::Log | Func::Tan), out),
        }
    }

    /// Simultaneous substitution followed by canonicalisation.
    pub fn substitute(&self, bindings: &Bindings) -> Expr {
        if bindings.is_empty() {
            return self.clone();
        }
        self.subst_rec(bindings)
    }

    fn subst_rec(&self, bindings: &Bindings) -> Expr {
        match self.node() {
            Node::Num(_) => self.clone(),
            Node::Sym(t) => bindings.get(t).cloned().unwrap_or_else(|| self.clone()),
            _ => self.map_children(|c| c.subst_rec(bindings)),
        }
    }

    /// Replaces every application of a named head by a concrete body.
    /// The body refers to its arguments through `params`.
    pub fn instantiate(&self, head: &str, params: &[Symbol], body: &Expr) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Sym(_) => self.clone(),
            Node::Apply(h, args) if h.name == head && args.len() == params.len() => {
                let mut b = body.clone();
                for &k in &h.derivs {
                    b = b.diff(&params[k]);
                }
                let args: Vec<Expr> = args.iter().map(|a| a.instantiate(head, params, body)).collect();
                let map: Bindings = params.iter().cloned().zip(args).collect();
                b.substitute(&map)
            }
            _ => self.map_children(|c| c.instantiate(head, params, body)),
        }
    }

    /// Names of arbitrary-function heads in the tree (derivatives excluded).
    pub fn heads(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.collect_heads(&mut out);
        out
    }

    fn collect_heads(&self, out: &mut BTreeSet<(String, usize)>) {
        match self.node() {
            Node::Num(_) | Node::Sym(_) => {}
            Node::Apply(h, v) => {
                out.insert((h.name.clone(), v.len()));
                v.iter().for_each(|c| c.collect_heads(out));
            }
            Node::Add(v) | Node::Mul(v) => v.iter().for_each(|c| c.collect_heads(out)),
            Node::Pow(b, _) | Node::Func(_, b) => b.collect_heads(out),
        }
    }

    /// Multiplies each top-level term by `factor`.
    pub fn distribute(&self, factor: &Expr) -> Expr {
        Expr::add(self.terms().iter().map(|t| t * factor).collect::<Vec<_>>())
    }

    /// Full expansion of sums inside products and positive integer powers.
    pub fn expand(&self) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Sym(_) => self.clone(),
            Node::Add(ts) => Expr::add(ts.iter().map(Expr::expand).collect::<Vec<_>>()),
            Node::Mul(fs) => fs.iter().fold(Expr::one(), |acc, f| multiply_out(&acc, &f.expand())),
            Node::Pow(b, r) if r.is_integer() && r > &Rat::one() && r <= &Rat::from_integer(8.into()) => {
                let k: i64 = r.to_integer().try_into().unwrap_or(1);
                let inner = b.expand();
                (0..k).fold(Expr::one(), |acc, _| multiply_out(&acc, &inner))
            }
            _ => self.map_children(Expr::expand),
        }
    }
}

fn multiply_out(a: &Expr, b: &Expr) -> Expr {
    let tb = b.terms();
    let mut out = Vec::new();
    for x in a.terms() {
        for y in &tb {
            out.push(&x * y);
        }
    }
    Expr::add(out)
}

impl Head {
    pub fn derivative(&self, slot: usize) -> Head {
        let mut h = self.clone();
        h.derivs.push(slot);
        h.derivs.sort_unstable();
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::jet::JetSpace;

    fn j() -> JetSpace {
        JetSpace::new(&["x", "y"], "u")
    }

    fn p(s: &str) -> Expr {
        parse(s, &j()).unwrap()
    }

    fn sym(s: &str) -> Symbol {
        p(s).as_sym().unwrap().clone()
    }

    #[test]
    fn diff_sin() {
        assert_eq!(p("sin(x)").diff(&sym("x")), p("cos(x)"));
    }

    #[test]
    fn diff_chain_rule_exp() {
        assert_eq!(p("exp(2*u)*u_xx").diff(&sym("u")), p("2*exp(2*u)*u_xx"));
    }

    #[test]
    fn diff_tan_form() {
        assert_eq!(p("tan(y)").diff(&sym("y")), p("1 + tan(y)^2"));
    }

    #[test]
    fn diff_constant_is_zero() {
        assert!(p("3").diff(&sym("x")).is_zero());
        assert!(p("y^2").diff(&sym("x")).is_zero());
    }

    #[test]
    fn diff_head_uses_formal_derivative() {
        let d = p("b(u_x*x)").diff(&sym("x"));
        assert_eq!(d, p("b__d1(u_x*x)*u_x"));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let mut b = Bindings::new();
        b.insert(sym("x"), p("y"));
        b.insert(sym("y"), p("x"));
        let e = p("x*y^2").substitute(&b);
        assert_eq!(e, p("y*x^2"));
        assert_eq!(p("x + y").substitute(&Bindings::new()), p("x + y"));
    }

    #[test]
    fn substitution_into_jet() {
        let w = JetSpace::new(&["x", "u"], "w");
        let us = JetSpace::new(&["x"], "u");
        let wx = w.jet(&[0]);
        let mut b = Bindings::new();
        b.insert(wx.clone(), -us.jet_expr(&[0]) * w.jet_expr(&[1]));
        let e = Expr::sym(&wx).substitute(&b);
        assert_eq!(e.to_string(), "-u_x*w_u");
    }

    #[test]
    fn instantiate_with_derivatives() {
        let t = Symbol::param("t");
        let body = Expr::sym(&t).powi(3);
        let e = p("b(x) + b__d1(y)");
        let got = e.instantiate("b", &[t], &body);
        assert_eq!(got, p("x^3 + 3*y^2"));
    }

    #[test]
    fn expand_distributes() {
        assert_eq!(p("(x + y)^2").expand(), p("x^2 + 2*x*y + y^2"));
        assert_eq!(p("(x + 1)*(x - 1)").expand(), p("x^2 - 1"));
    }

    #[test]
    fn denominators_found() {
        let w = JetSpace::new(&["x", "u"], "w");
        let e = parse("w_x/w_u + w_xx", &w).unwrap();
        let d: Vec<String> = e.denominator_symbols().iter().map(|s| s.name().to_string()).collect();
        assert_eq!(d, vec!["w_u"]);
    }
}
