//! The algebras of dimension one to three with closed-form invariant fields.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_invariant_fields, verify_realization, z_coords, InvariantFields, LieError, StructureConstants};
use crate::expr::normal::normal;
use crate::expr::{parse, rat, Bindings, Expr, Rat, SamplerConfig};
use crate::jet::{JetSpace, VectorField};

/// Coordinate names substituted for `z1..zn` when the group acts on the
/// space of independent and dependent variables.  Exactly one of them is `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub names: Vec<&'static str>,
}

impl Chart {
    /// Position of the dependent variable.
    pub fn dependent(&self) -> usize {
        self.names.iter().position(|n| *n == "u").expect("chart contains u")
    }

    pub fn independent(&self) -> Vec<&'static str> {
        self.names.iter().copied().filter(|n| *n != "u").collect()
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub label: &'static str,
    pub params: BTreeMap<String, Rat>,
    pub constants: StructureConstants,
    /// `ξ` and `η` over `z1..zn`.
    pub fields: InvariantFields,
    /// Splitting used for equations with a simply transitive group; `None`
    /// for the one-dimensional algebra.
    pub chart: Option<Chart>,
}

impl CatalogEntry {
    pub fn dim(&self) -> usize {
        self.constants.dim()
    }

    /// Fields over `x1..xn`, the realization used for free intransitive actions.
    pub fn type1_fields(&self) -> InvariantFields {
        let names: Vec<String> = (1..=self.dim()).map(|k| format!("x{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.fields.rename(&refs)
    }

    /// Fields over the chart coordinates.
    pub fn type2_fields(&self) -> Option<InvariantFields> {
        self.chart.as_ref().map(|c| self.fields.rename(&c.names))
    }

    /// Parameters rendered as `h=1/2`, sorted by name.
    pub fn param_string(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
    }
}

struct Spec {
    name: &'static str,
    aliases: &'static [&'static str],
    label: &'static str,
    dim: usize,
    params: &'static [&'static str],
    brackets: &'static [(usize, usize, usize, &'static str)],
    xi: &'static [(usize, [&'static str; 3])],
    eta: &'static [(usize, [&'static str; 3])],
    chart: Option<[&'static str; 3]>,
}

const SPECS: &[Spec] = &[
    Spec {
        name: "g1",
        aliases: &[],
        label: "g1",
        dim: 1,
        params: &[],
        brackets: &[],
        xi: &[],
        eta: &[],
        chart: None,
    },
    Spec {
        name: "2g1",
        aliases: &[],
        label: "2g1",
        dim: 2,
        params: &[],
        brackets: &[],
        xi: &[],
        eta: &[],
        chart: Some(["x", "u", ""]),
    },
    Spec {
        name: "g2",
        aliases: &[],
        label: "g2",
        dim: 2,
        params: &[],
        brackets: &[(1, 2, 1, "1")],
        xi: &[(2, ["z1", "1", ""])],
        eta: &[(1, ["exp(z2)", "0", ""])],
        chart: Some(["x", "u", ""]),
    },
    Spec {
        name: "3g1",
        aliases: &[],
        label: "3g1",
        dim: 3,
        params: &[],
        brackets: &[],
        xi: &[],
        eta: &[],
        chart: Some(["x", "y", "u"]),
    },
    Spec {
        name: "g1_g2",
        aliases: &["g1+g2"],
        label: "g1+g2",
        dim: 3,
        params: &[],
        brackets: &[(1, 2, 1, "1")],
        xi: &[(2, ["z1", "1", "0"])],
        eta: &[(1, ["exp(z2)", "0", "0"])],
        chart: Some(["x", "y", "u"]),
    },
    Spec {
        name: "g3_1",
        aliases: &[],
        label: "g3_1",
        dim: 3,
        params: &[],
        brackets: &[(2, 3, 1, "1")],
        xi: &[(3, ["z2", "0", "1"])],
        eta: &[(2, ["z3", "1", "0"])],
        chart: Some(["u", "x", "y"]),
    },
    Spec {
        name: "g3_2",
        aliases: &[],
        label: "g3_2",
        dim: 3,
        params: &[],
        brackets: &[(1, 3, 1, "1"), (2, 3, 1, "1"), (2, 3, 2, "1")],
        xi: &[(3, ["z1 + z2", "z2", "1"])],
        eta: &[(1, ["exp(z3)", "0", "0"]), (2, ["z3*exp(z3)", "exp(z3)", "0"])],
        chart: Some(["u", "y", "x"]),
    },
    Spec {
        name: "g3_3",
        aliases: &[],
        label: "g3_3",
        dim: 3,
        params: &[],
        brackets: &[(1, 3, 1, "1"), (2, 3, 2, "1")],
        xi: &[(3, ["z1", "z2", "1"])],
        eta: &[(1, ["exp(z3)", "0", "0"]), (2, ["0", "exp(z3)", "0"])],
        chart: Some(["x", "y", "u"]),
    },
    Spec {
        name: "g3_4",
        aliases: &[],
        label: "g3_4",
        dim: 3,
        params: &["h"],
        brackets: &[(1, 3, 1, "1"), (2, 3, 2, "h")],
        xi: &[(3, ["z1", "h*z2", "1"])],
        eta: &[(1, ["exp(z3)", "0", "0"]), (2, ["0", "exp(h*z3)", "0"])],
        chart: Some(["x", "y", "u"]),
    },
    Spec {
        name: "g3_5",
        aliases: &[],
        label: "g3_5",
        dim: 3,
        params: &["p"],
        brackets: &[(1, 3, 1, "p"), (1, 3, 2, "-1"), (2, 3, 1, "1"), (2, 3, 2, "p")],
        xi: &[(3, ["p*z1 + z2", "p*z2 - z1", "1"])],
        eta: &[
            (1, ["exp(p*z3)*cos(z3)", "-exp(p*z3)*sin(z3)", "0"]),
            (2, ["exp(p*z3)*sin(z3)", "exp(p*z3)*cos(z3)", "0"]),
        ],
        chart: Some(["x", "y", "u"]),
    },
    Spec {
        name: "g3_6",
        aliases: &[],
        label: "g3_6",
        dim: 3,
        params: &[],
        brackets: &[(1, 2, 1, "1"), (1, 3, 2, "2"), (2, 3, 3, "1")],
        xi: &[(2, ["z1", "1", "0"]), (3, ["z1^2", "2*z1", "exp(z2)"])],
        eta: &[(1, ["exp(z2)", "2*z3", "z3^2"]), (2, ["0", "1", "z3"])],
        chart: Some(["x", "y", "u"]),
    },
    Spec {
        name: "g3_7",
        aliases: &["so3"],
        label: "g3_7",
        dim: 3,
        params: &[],
        brackets: &[(1, 2, 3, "1"), (2, 3, 1, "1"), (1, 3, 2, "-1")],
        xi: &[
            (2, ["sin(z1)*tan(z2)", "cos(z1)", "sin(z1)/cos(z2)"]),
            (3, ["cos(z1)*tan(z2)", "-sin(z1)", "cos(z1)/cos(z2)"]),
        ],
        eta: &[
            (1, ["cos(z3)/cos(z2)", "-sin(z3)", "cos(z3)*tan(z2)"]),
            (2, ["sin(z3)/cos(z2)", "cos(z3)", "sin(z3)*tan(z2)"]),
        ],
        chart: Some(["x", "y", "u"]),
    },
];

/// Canonical names in table order.
pub fn catalog_names() -> Vec<&'static str> {
    SPECS.iter().map(|s| s.name).collect()
}

fn find(name: &str) -> Result<&'static Spec, LieError> {
    SPECS
        .iter()
        .find(|s| s.name == name || s.aliases.contains(&name))
        .ok_or_else(|| LieError::UnknownAlgebra(name.to_string()))
}

/// Parameter names an algebra accepts.
pub fn param_names(name: &str) -> Result<&'static [&'static str], LieError> {
    find(name).map(|s| s.params)
}

fn default_param(p: &str) -> Rat {
    match p {
        "h" => rat(1, 2),
        _ => Rat::zero(),
    }
}

fn check_param(name: &str, p: &str, v: &Rat) -> Result<(), LieError> {
    let ok = match p {
        "h" => v.abs() <= Rat::one() && !v.is_zero() && !v.is_one(),
        "p" => !v.is_negative(),
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        let rule = if p == "h" { "|h| <= 1, h != 0, 1" } else { "p >= 0" };
        Err(LieError::ParameterOutOfRange(format!("{name}: {p} = {v} violates {rule}")))
    }
}

/// Fully populated entry; the stored fields are checked with
/// [`verify_realization`] before being returned.
pub fn lookup(name: &str, params: &BTreeMap<String, Rat>) -> Result<CatalogEntry, LieError> {
    let spec = find(name)?;
    if let Some(k) = params.keys().find(|k| !spec.params.contains(&k.as_str())) {
        return Err(LieError::Input(format!("{} takes no parameter `{k}`", spec.name)));
    }
    let mut values = BTreeMap::new();
    for p in spec.params {
        let v = params.get(*p).cloned().unwrap_or_else(|| default_param(p));
        check_param(spec.name, p, &v)?;
        values.insert(p.to_string(), v);
    }
    let n = spec.dim;
    let names: Vec<String> = (1..=n).map(|k| format!("z{k}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let space = JetSpace::new(&refs, "w").with_params(spec.params);
    let subst: Bindings = space.params().iter().map(|s| (s.clone(), Expr::num(values[s.name()].clone()))).collect();
    let read = |text: &str| -> Expr {
        let e = parse(text, &space).unwrap_or_else(|err| panic!("catalog entry `{text}`: {err}"));
        normal(&e.substitute(&subst))
    };

    let mut constants = StructureConstants::new(n);
    for &(i, j, k, c) in spec.brackets {
        let c = read(c).as_num().cloned().expect("bracket coefficient is a number");
        constants.set(i, j, k, c)?;
    }
    constants.validate()?;

    let z = z_coords(n);
    let table = |rows: &[(usize, [&'static str; 3])]| -> Vec<VectorField> {
        (0..n)
            .map(|i| match rows.iter().find(|(k, _)| *k == i + 1) {
                Some((_, cs)) => VectorField::new(z.clone(), cs[..n].iter().map(|c| read(c)).collect()),
                None => VectorField::unit(&z, i),
            })
            .collect()
    };
    let fields = InvariantFields { coords: z.clone(), xi: table(spec.xi), eta: table(spec.eta) };
    let report = verify_realization(&fields, &constants, &SamplerConfig::default());
    if !report.pass() {
        return Err(LieError::VerificationFailed(format!("{}: {}", spec.name, report.failures().join("; "))));
    }
    Ok(CatalogEntry {
        name: spec.name,
        label: spec.label,
        params: values,
        constants,
        fields,
        chart: spec.chart.map(|c| Chart { names: c[..n].to_vec() }),
    })
}

/// Entry for an algebra given only by structure constants.  Fields are
/// constructed and gated; the chart is `(x, u)`, `(x, y, u)` or
/// `(x, y, z, u)` by dimension.
pub fn custom_entry(
    name: &'static str,
    constants: StructureConstants,
    params: BTreeMap<String, Rat>,
    cfg: &SamplerConfig,
) -> Result<CatalogEntry, LieError> {
    let fields = build_invariant_fields(&constants, cfg)?;
    let chart = match constants.dim() {
        2 => Some(vec!["x", "u"]),
        3 => Some(vec!["x", "y", "u"]),
        4 => Some(vec!["x", "y", "z", "u"]),
        _ => None,
    };
    Ok(CatalogEntry { name, label: name, params, constants, fields, chart: chart.map(|names| Chart { names }) })
}

/// A seeded admissible parameter draw: `h = k/8` avoiding 0 and 1, and
/// `p = k/4` with `0 <= k <= 8`.
pub fn random_params(name: &str, seed: u64) -> Result<BTreeMap<String, Rat>, LieError> {
    let spec = find(name)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BTreeMap::new();
    for p in spec.params {
        let v = match *p {
            "h" => loop {
                let k: i64 = rng.gen_range(-8..=7);
                if k != 0 {
                    break rat(k, 8);
                }
            },
            _ => rat(rng.gen_range(0..=8), 4),
        };
        out.insert(p.to_string(), v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat_int;
    use crate::liealg::{build_invariant_fields, det_check};

    fn no_params() -> BTreeMap<String, Rat> {
        BTreeMap::new()
    }

    #[test]
    fn every_entry_loads() {
        for name in catalog_names() {
            let e = lookup(name, &no_params()).unwrap();
            assert_eq!(e.fields.xi.len(), e.dim());
        }
        assert_eq!(lookup("so3", &no_params()).unwrap().name, "g3_7");
        assert_eq!(lookup("g1+g2", &no_params()).unwrap().name, "g1_g2");
    }

    #[test]
    fn parameter_constraints() {
        let h = |v: Rat| BTreeMap::from([("h".to_string(), v)]);
        assert!(matches!(lookup("g3_4", &h(rat_int(1))), Err(LieError::ParameterOutOfRange(_))));
        assert!(matches!(lookup("g3_4", &h(rat_int(0))), Err(LieError::ParameterOutOfRange(_))));
        assert!(matches!(lookup("g3_4", &h(rat(3, 2))), Err(LieError::ParameterOutOfRange(_))));
        assert!(lookup("g3_4", &h(rat_int(-1))).is_ok());
        let p = BTreeMap::from([("p".to_string(), rat(-1, 2))]);
        assert!(matches!(lookup("g3_5", &p), Err(LieError::ParameterOutOfRange(_))));
        assert!(matches!(lookup("g2", &h(rat(1, 3))), Err(LieError::Input(_))));
        assert!(matches!(lookup("g9", &no_params()), Err(LieError::UnknownAlgebra(_))));
    }

    #[test]
    fn generator_of_g3_4() {
        let h = BTreeMap::from([("h".to_string(), rat(1, 2))]);
        let e = lookup("g3_4", &h).unwrap();
        let f = e.type2_fields().unwrap();
        let j = JetSpace::new(&["x", "y", "u"], "w");
        let want: Vec<Expr> = ["x", "y/2", "1"].iter().map(|s| parse(s, &j).unwrap()).collect();
        assert_eq!(f.xi[2].coeffs, want);
    }

    #[test]
    fn abelian_generators() {
        let e = lookup("2g1", &no_params()).unwrap();
        let f = e.type2_fields().unwrap();
        assert_eq!(f.coords.iter().map(|s| s.name()).collect::<Vec<_>>(), ["x", "u"]);
        assert_eq!(f.xi[0], VectorField::unit(&f.coords, 0));
        assert_eq!(f.xi[1], VectorField::unit(&f.coords, 1));
    }

    #[test]
    fn constructed_fields_match_catalog() {
        let cfg = SamplerConfig::default();
        for name in catalog_names() {
            for seed in 0..3 {
                let params = random_params(name, seed).unwrap();
                let e = lookup(name, &params).unwrap();
                let built = build_invariant_fields(&e.constants, &cfg).unwrap();
                for i in 0..e.dim() {
                    assert_eq!(built.xi[i], e.fields.xi[i], "{name} {params:?} xi{}", i + 1);
                    assert_eq!(built.eta[i], e.fields.eta[i], "{name} {params:?} eta{}", i + 1);
                }
                assert!(det_check(&e.fields.xi, &cfg, 16), "{name}");
                if !e.params.is_empty() {
                    // Draws must stay admissible.
                    lookup(name, &e.params).unwrap();
                }
            }
        }
    }

    #[test]
    fn identity_values_are_unit_fields() {
        let zero: crate::expr::Assignment = z_coords(3).into_iter().map(|s| (s, 0.0)).collect();
        for name in catalog_names() {
            let e = lookup(name, &no_params()).unwrap();
            for i in 0..e.dim() {
                for (k, (x, y)) in e.fields.xi[i].coeffs.iter().zip(&e.fields.eta[i].coeffs).enumerate() {
                    let want = if k == i { 1.0 } else { 0.0 };
                    assert_eq!(x.eval(&zero), Ok(want));
                    assert_eq!(y.eval(&zero), Ok(want));
                }
            }
        }
    }
}
