//! Immutable symbolic expressions over coordinates, jet variables and
//! elementary functions.
//!
//! Every constructor returns a canonical tree: sums and products are
//! flattened, constants are folded, like terms and like powers are
//! collected, and operands are sorted by [`Ord`] on [`Expr`].  Powers of
//! equal bases are merged, so `exp(u)*exp(u)` becomes `exp(u)^2`.

mod calc;
mod eval;
pub mod normal;
mod parse;
mod render;
pub mod sample;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use calc::Bindings;
pub use eval::{eval_opaque, Assignment, EvalError};
pub use parse::{parse, ParseError, Resolver, Unresolved};
pub use sample::{is_zero, SamplerConfig, ZeroTestError};

/// Exact rational number used for constants and exponents.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-1/2"` or a decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rat> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
    };
    if body.is_empty() {
        return None;
    }
    let value = if let Some((n, d)) = body.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Rat::new(n, d)
    } else if let Some((int, frac)) = body.split_once('.') {
        if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{int}{frac}");
        let n: BigInt = if digits.is_empty() { return None } else { digits.parse().ok()? };
        let d = num_traits::pow(BigInt::from(10), frac.len());
        Rat::new(n, d)
    } else {
        Rat::from_integer(body.parse().ok()?)
    };
    Some(if neg { -value } else { value })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    /// Independent (or group) coordinate such as `x`, `z1`, `y1`.
    Base,
    /// Free parameter; never a jet coordinate.
    Param,
    /// Jet coordinate `dep_{idx}`; `idx` holds coordinate positions, sorted.
    Jet { dep: String, idx: Vec<usize> },
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct SymbolData {
    name: String,
    kind: SymbolKind,
}

/// A named variable. Jet variables carry their dependent name and the sorted
/// multi-index, so `u_xy` and `u_yx` are the same symbol.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Symbol(Arc<SymbolData>);

impl Symbol {
    pub fn base(name: &str) -> Symbol {
        Symbol(Arc::new(SymbolData { name: name.to_string(), kind: SymbolKind::Base }))
    }

    pub fn param(name: &str) -> Symbol {
        Symbol(Arc::new(SymbolData { name: name.to_string(), kind: SymbolKind::Param }))
    }

    /// Jet variable with an already-rendered name. Prefer [`crate::jet::JetSpace::jet`].
    pub fn jet(name: &str, dep: &str, mut idx: Vec<usize>) -> Symbol {
        idx.sort_unstable();
        Symbol(Arc::new(SymbolData {
            name: name.to_string(),
            kind: SymbolKind::Jet { dep: dep.to_string(), idx },
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.0.kind
    }

    pub fn is_jet(&self) -> bool {
        matches!(self.0.kind, SymbolKind::Jet { .. })
    }

    /// Derivative order of a jet variable; `None` for coordinates and parameters.
    pub fn jet_order(&self) -> Option<usize> {
        match &self.0.kind {
            SymbolKind::Jet { idx, .. } => Some(idx.len()),
            _ => None,
        }
    }

    fn class(&self) -> u8 {
        match self.0.kind {
            SymbolKind::Base => 1,
            SymbolKind::Param => 2,
            SymbolKind::Jet { .. } => 3,
        }
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.class().cmp(&other.class()).then_with(|| match (&self.0.kind, &other.0.kind) {
            (SymbolKind::Jet { dep: d1, idx: i1 }, SymbolKind::Jet { dep: d2, idx: i2 }) => d1
                .cmp(d2)
                .then(i1.len().cmp(&i2.len()))
                .then(i1.cmp(i2))
                .then_with(|| self.0.name.cmp(&other.0.name)),
            _ => self.0.name.cmp(&other.0.name),
        })
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            _ => return None,
        })
    }
}

/// Arbitrary-function head, possibly carrying formal partial derivatives
/// (`derivs` lists differentiated argument positions, sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Head {
    pub name: String,
    pub derivs: Vec<usize>,
}

impl Head {
    pub fn new(name: &str) -> Head {
        Head { name: name.to_string(), derivs: Vec::new() }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Num(Rat),
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, Rat),
    Func(Func, Expr),
    Apply(Head, Vec<Expr>),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn raw(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn num(value: Rat) -> Expr {
        Expr::raw(Node::Num(value))
    }

    pub fn int(value: i64) -> Expr {
        Expr::num(rat_int(value))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn sym(s: &Symbol) -> Expr {
        Expr::raw(Node::Sym(s.clone()))
    }

    pub fn as_num(&self) -> Option<&Rat> {
        match self.node() {
            Node::Num(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_sym(&self) -> Option<&Symbol> {
        match self.node() {
            Node::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_num().is_some_and(|r| r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_num().is_some_and(|r| r.is_one())
    }

    /// Top-level additive terms (a single-element slice for non-sums).
    pub fn terms(&self) -> Vec<Expr> {
        match self.node() {
            Node::Add(ts) => ts.clone(),
            _ => vec![self.clone()],
        }
    }

    pub fn add(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let mut constant = Rat::zero();
        let mut order: Vec<Expr> = Vec::new();
        let mut coeffs: HashMap<Expr, Rat> = HashMap::new();
        let mut stack: Vec<Expr> = terms.into_iter().collect();
        stack.reverse();
        while let Some(t) = stack.pop() {
            match t.node() {
                Node::Num(c) => constant += c,
                Node::Add(inner) => stack.extend(inner.iter().rev().cloned()),
                _ => {
                    let (c, rest) = t.split_coeff();
                    match coeffs.get_mut(&rest) {
                        Some(acc) => *acc += c,
                        None => {
                            order.push(rest.clone());
                            coeffs.insert(rest, c);
                        }
                    }
                }
            }
        }
        let mut out: Vec<(Expr, Rat)> = order
            .into_iter()
            .filter_map(|rest| {
                let c = coeffs.remove(&rest).unwrap_or_default();
                (!c.is_zero()).then_some((rest, c))
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<Expr> = Vec::with_capacity(out.len() + 1);
        if !constant.is_zero() {
            terms.push(Expr::num(constant));
        }
        terms.extend(out.into_iter().map(|(rest, c)| Expr::scaled(c, rest)));
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.pop().unwrap_or_else(Expr::zero),
            _ => Expr::raw(Node::Add(terms)),
        }
    }

    /// Splits a canonical non-sum into `(coefficient, rest)`.
    fn split_coeff(&self) -> (Rat, Expr) {
        match self.node() {
            Node::Num(c) => (c.clone(), Expr::one()),
            Node::Mul(fs) => match fs[0].node() {
                Node::Num(c) => {
                    let rest = if fs.len() == 2 { fs[1].clone() } else { Expr::raw(Node::Mul(fs[1..].to_vec())) };
                    (c.clone(), rest)
                }
                _ => (Rat::one(), self.clone()),
            },
            _ => (Rat::one(), self.clone()),
        }
    }

    /// Coefficient times an already canonical, coefficient-free term.
    fn scaled(c: Rat, rest: Expr) -> Expr {
        if c.is_one() {
            return rest;
        }
        if c.is_zero() {
            return Expr::zero();
        }
        match rest.node() {
            Node::Num(r) => Expr::num(c * r),
            Node::Mul(fs) => {
                let mut v = Vec::with_capacity(fs.len() + 1);
                v.push(Expr::num(c));
                v.extend(fs.iter().cloned());
                Expr::raw(Node::Mul(v))
            }
            _ => Expr::raw(Node::Mul(vec![Expr::num(c), rest])),
        }
    }

    pub fn mul(factors: impl IntoIterator<Item = Expr>) -> Expr {
        let mut coeff = Rat::one();
        let mut order: Vec<Expr> = Vec::new();
        let mut exps: HashMap<Expr, Rat> = HashMap::new();
        let mut stack: Vec<Expr> = factors.into_iter().collect();
        stack.reverse();
        while let Some(f) = stack.pop() {
            match f.node() {
                Node::Num(c) => {
                    if c.is_zero() {
                        return Expr::zero();
                    }
                    coeff *= c;
                }
                Node::Mul(inner) => stack.extend(inner.iter().rev().cloned()),
                _ => {
                    let (b, e) = f.pow_parts();
                    match exps.get_mut(&b) {
                        Some(acc) => *acc += e,
                        None => {
                            order.push(b.clone());
                            exps.insert(b, e);
                        }
                    }
                }
            }
        }
        let mut out: Vec<Expr> = Vec::with_capacity(order.len());
        let mut again: Vec<Expr> = Vec::new();
        for b in order {
            let e = exps.remove(&b).unwrap_or_default();
            if e.is_zero() {
                continue;
            }
            let p = Expr::pow(&b, e);
            match p.node() {
                Node::Num(c) => coeff *= c,
                Node::Mul(_) => again.push(p),
                _ => out.push(p),
            }
        }
        if !again.is_empty() {
            again.extend(out);
            again.push(Expr::num(coeff));
            return Expr::mul(again);
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        out.sort();
        if out.is_empty() {
            return Expr::num(coeff);
        }
        if coeff.is_one() && out.len() == 1 {
            return out.pop().unwrap_or_else(Expr::one);
        }
        if !coeff.is_one() {
            out.insert(0, Expr::num(coeff));
        }
        Expr::raw(Node::Mul(out))
    }

    fn pow_parts(&self) -> (Expr, Rat) {
        match self.node() {
            Node::Pow(b, e) => (b.clone(), e.clone()),
            _ => (self.clone(), Rat::one()),
        }
    }

    pub fn pow(base: &Expr, exp: Rat) -> Expr {
        if exp.is_zero() {
            return Expr::one();
        }
        if exp.is_one() {
            return base.clone();
        }
        match base.node() {
            Node::Num(c) => {
                if exp.is_integer() {
                    if c.is_zero() && exp.is_negative() {
                        return Expr::raw(Node::Pow(base.clone(), exp));
                    }
                    let k = exp.to_integer();
                    return Expr::num(rat_pow(c, &k));
                }
                if c.is_one() {
                    return Expr::one();
                }
                if c.is_positive() {
                    if let Some(root) = exact_root(c, exp.denom()) {
                        return Expr::num(rat_pow(&root, exp.numer()));
                    }
                }
                Expr::raw(Node::Pow(base.clone(), exp))
            }
            Node::Pow(b, e) if exp.is_integer() => Expr::pow(b, e * &exp),
            Node::Mul(fs) if exp.is_integer() => Expr::mul(fs.iter().map(|f| Expr::pow(f, exp.clone()))),
            _ => Expr::raw(Node::Pow(base.clone(), exp)),
        }
    }

    pub fn powi(&self, k: i64) -> Expr {
        Expr::pow(self, rat_int(k))
    }

    pub fn recip(&self) -> Expr {
        self.powi(-1)
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        if let Some(c) = arg.as_num() {
            if c.is_zero() {
                return match f {
                    Func::Exp | Func::Cos => Expr::one(),
                    Func::Sin | Func::Tan => Expr::zero(),
                    Func::Log => Expr::raw(Node::Func(f, arg)),
                };
            }
            if c.is_one() && f == Func::Log {
                return Expr::zero();
            }
        }
        match (f, arg.node()) {
            (Func::Log, Node::Func(Func::Exp, inner)) => inner.clone(),
            _ => Expr::raw(Node::Func(f, arg)),
        }
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::func(Func::Exp, arg)
    }
    pub fn log(arg: Expr) -> Expr {
        Expr::func(Func::Log, arg)
    }
    pub fn sin(arg: Expr) -> Expr {
        Expr::func(Func::Sin, arg)
    }
    pub fn cos(arg: Expr) -> Expr {
        Expr::func(Func::Cos, arg)
    }
    pub fn tan(arg: Expr) -> Expr {
        Expr::func(Func::Tan, arg)
    }

    pub fn apply(head: Head, args: Vec<Expr>) -> Expr {
        let mut head = head;
        head.derivs.sort_unstable();
        Expr::raw(Node::Apply(head, args))
    }

    /// Rebuilds the tree through the canonical constructors.
    pub fn simplify_basic(&self) -> Expr {
        self.map_children(|c| c.simplify_basic())
    }

    /// Applies `f` to each direct child and rebuilds canonically.
    pub fn map_children(&self, mut f: impl FnMut(&Expr) -> Expr) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Sym(_) => self.clone(),
            Node::Add(ts) => Expr::add(ts.iter().map(&mut f).collect::<Vec<_>>()),
            Node::Mul(fs) => Expr::mul(fs.iter().map(&mut f).collect::<Vec<_>>()),
            Node::Pow(b, e) => Expr::pow(&f(b), e.clone()),
            Node::Func(g, a) => Expr::func(*g, f(a)),
            Node::Apply(h, args) => Expr::apply(h.clone(), args.iter().map(&mut f).collect()),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + match self.node() {
            Node::Num(_) | Node::Sym(_) => 0,
            Node::Add(v) | Node::Mul(v) | Node::Apply(_, v) => v.iter().map(Expr::size).sum(),
            Node::Pow(b, _) | Node::Func(_, b) => b.size(),
        }
    }

    fn class(&self) -> u8 {
        match self.node() {
            Node::Num(_) => 0,
            Node::Sym(s) => s.class(),
            Node::Func(..) => 4,
            Node::Apply(..) => 5,
            Node::Add(_) => 6,
            Node::Mul(_) => 7,
            Node::Pow(..) => 8,
        }
    }

    fn cmp_base(&self, other: &Expr) -> Ordering {
        let c = self.class().cmp(&other.class());
        if c != Ordering::Equal {
            return c;
        }
        match (self.node(), other.node()) {
            (Node::Num(a), Node::Num(b)) => a.cmp(b),
            (Node::Sym(a), Node::Sym(b)) => a.cmp(b),
            (Node::Func(f, a), Node::Func(g, b)) => f.cmp(g).then_with(|| a.cmp(b)),
            (Node::Apply(h1, a1), Node::Apply(h2, a2)) => h1.cmp(h2).then_with(|| cmp_slices(a1, a2)),
            (Node::Add(a), Node::Add(b)) | (Node::Mul(a), Node::Mul(b)) => cmp_slices(a, b),
            (Node::Pow(b1, e1), Node::Pow(b2, e2)) => b1.cmp(b2).then_with(|| e1.cmp(e2)),
            _ => Ordering::Equal,
        }
    }
}

fn cmp_slices(a: &[Expr], b: &[Expr]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.cmp(y);
        if c != Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}

/// Canonical total order: constants < base coordinates < parameters < jet
/// variables < elementary functions < arbitrary functions < compound nodes.
/// Powers sort next to their base.
impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (b1, e1) = match self.node() {
            Node::Pow(b, e) => (b, e.clone()),
            _ => (self, Rat::one()),
        };
        let (b2, e2) = match other.node() {
            Node::Pow(b, e) => (b, e.clone()),
            _ => (other, Rat::one()),
        };
        if std::ptr::eq(b1, self) && std::ptr::eq(b2, other) {
            return self.cmp_base(other);
        }
        b1.cmp(b2).then_with(|| e1.cmp(&e2))
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn rat_pow(base: &Rat, k: &BigInt) -> Rat {
    let n = k.abs().to_usize().unwrap_or(0);
    let p = num_traits::pow(base.clone(), n);
    if k.is_negative() {
        p.recip()
    } else {
        p
    }
}

fn exact_root(c: &Rat, q: &BigInt) -> Option<Rat> {
    let q = q.to_u32()?;
    if q > 8 {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(q);
        (num_traits::pow(r.clone(), q as usize) == *n).then_some(r)
    };
    Some(Rat::new(root(c.numer())?, root(c.denom())?))
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Expr {
        Expr::sym(s)
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Expr {
        Expr::int(v)
    }
}

impl From<Rat> for Expr {
    fn from(v: Rat) -> Expr {
        Expr::num(v)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl ops::$trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs.clone())
            }
        }
        impl ops::$trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs.clone())
            }
        }
        impl ops::$trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::add([a, b]));
binop!(Sub, sub, |a, b| Expr::add([a, -b]));
binop!(Mul, mul, |a, b| Expr::mul([a, b]));
binop!(Div, div, |a, b| Expr::mul([a, b.recip()]));

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul([Expr::int(-1), self])
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -(self.clone())
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::add(iter.collect::<Vec<_>>())
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::mul(iter.collect::<Vec<_>>())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::sym(&Symbol::base("x"))
    }
    fn y() -> Expr {
        Expr::sym(&Symbol::base("y"))
    }

    #[test]
    fn x_minus_x_is_zero() {
        assert!((x() - x()).is_zero());
    }

    #[test]
    fn x_over_x_is_one() {
        assert!((x() / x()).is_one());
    }

    #[test]
    fn identity_elements_drop_out() {
        let e = (x() + Expr::zero()) * Expr::one();
        assert_eq!(e, x());
    }

    #[test]
    fn exp_squared_is_a_power() {
        let u = Expr::sym(&Symbol::jet("u", "u", vec![]));
        let e = Expr::exp(u.clone()) * Expr::exp(u.clone());
        assert_eq!(e, Expr::exp(u).powi(2));
    }

    #[test]
    fn constants_sort_first_then_coordinates_then_jets() {
        let ux = Expr::sym(&Symbol::jet("u_x", "u", vec![0]));
        let e = Expr::add([ux.clone(), Expr::sin(x()), y(), x(), Expr::int(3)]);
        let Node::Add(ts) = e.node() else { panic!() };
        assert_eq!(ts[0], Expr::int(3));
        assert_eq!(ts[1], x());
        assert_eq!(ts[2], y());
        assert_eq!(ts[3], ux);
    }

    #[test]
    fn like_terms_collect() {
        let e = x() * y() + Expr::int(2) * (y() * x());
        assert_eq!(e, Expr::int(3) * x() * y());
    }

    #[test]
    fn integer_power_of_product_distributes() {
        let e = (x() * y()).powi(2) / x();
        assert_eq!(e, x() * y().powi(2));
    }

    #[test]
    fn exact_rational_roots() {
        let e = Expr::pow(&Expr::num(rat(4, 9)), rat(1, 2));
        assert_eq!(e, Expr::num(rat(2, 3)));
        let e = Expr::pow(&Expr::int(2), rat(1, 2));
        assert!(matches!(e.node(), Node::Pow(..)));
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1/3"), Some(rat(-1, 3)));
        assert_eq!(parse_rational("7"), Some(rat_int(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }
}
