//! Invariants and equations transcribed from the published tables.
//!
//! Entries are stored as printed.  Where the printed form is not invariant
//! the entry also carries the corrected form, and the self-test checks that
//! the printed form fails while the corrected one passes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::expr::normal::normal;
use crate::expr::{parse, Bindings, Expr, Rat};
use crate::invariants::Pipeline;
use crate::jet::JetSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Table {
    #[serde(rename = "1d")]
    OneD,
    #[serde(rename = "2d-free")]
    TwoDFree,
    #[serde(rename = "3d-free")]
    ThreeDFree,
    #[serde(rename = "2d-transitive")]
    TwoDTransitive,
    #[serde(rename = "3d-transitive")]
    ThreeDTransitive,
}

impl Table {
    pub const ALL: [Table; 5] =
        [Table::OneD, Table::TwoDFree, Table::ThreeDFree, Table::TwoDTransitive, Table::ThreeDTransitive];

    pub fn name(self) -> &'static str {
        match self {
            Table::OneD => "1d",
            Table::TwoDFree => "2d-free",
            Table::ThreeDFree => "3d-free",
            Table::TwoDTransitive => "2d-transitive",
            Table::ThreeDTransitive => "3d-transitive",
        }
    }

    pub fn pipeline(self) -> Pipeline {
        match self {
            Table::OneD | Table::TwoDFree | Table::ThreeDFree => Pipeline::Free,
            _ => Pipeline::Transitive,
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Table {
    type Err = String;

    fn from_str(s: &str) -> Result<Table, String> {
        Table::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown table `{s}` (expected one of 1d, 2d-free, 3d-free, 2d-transitive, 3d-transitive)"))
    }
}

/// One transcribed expression.
#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub printed: &'static str,
    pub corrected: Option<&'static str>,
}

impl Entry {
    pub fn text(&self) -> &'static str {
        self.corrected.unwrap_or(self.printed)
    }
}

const fn ok(printed: &'static str) -> Entry {
    Entry { printed, corrected: None }
}

const fn fix(printed: &'static str, corrected: &'static str) -> Entry {
    Entry { printed, corrected: Some(corrected) }
}

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub algebra: &'static str,
    pub table: Table,
    pub entries: &'static [Entry],
    /// Printed equation; `{v1}`, `{v2}` stand for the first-order invariants.
    pub template: Option<Entry>,
}

impl Fixture {
    pub fn pipeline(&self) -> Pipeline {
        self.table.pipeline()
    }

    /// Jet space the entries are written over.  Type-I rows use `x1..xn`
    /// and, for `m = 2`, the invariant coordinate `y1`.
    pub fn space(&self, dim: usize, m: usize) -> JetSpace {
        match self.pipeline() {
            Pipeline::Transitive if dim == 2 => JetSpace::new(&["x"], "u"),
            Pipeline::Transitive => JetSpace::new(&["x", "y"], "u"),
            Pipeline::Free => {
                let mut names: Vec<String> = (1..=dim).map(|k| format!("x{k}")).collect();
                names.extend((1..m).map(|k| format!("y{k}")));
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                JetSpace::new(&refs, "u")
            }
        }
        .with_params(&["h", "p"])
    }

    fn read(&self, text: &str, space: &JetSpace, params: &BTreeMap<String, Rat>) -> Expr {
        let subst: Bindings = space
            .params()
            .iter()
            .map(|s| (s.clone(), Expr::num(params.get(s.name()).cloned().unwrap_or_default())))
            .collect();
        let e = parse(text, space).unwrap_or_else(|err| panic!("fixture {} `{text}`: {err}", self.algebra));
        normal(&e.substitute(&subst))
    }

    /// Entries that exist for the given `m` (entries in `y1` need `m >= 2`).
    pub fn active(&self, m: usize) -> Vec<Entry> {
        self.entries.iter().copied().filter(|e| m >= 2 || !e.printed.contains("y1")).collect()
    }

    /// Corrected entries as expressions.
    pub fn exprs(&self, space: &JetSpace, params: &BTreeMap<String, Rat>, m: usize) -> Vec<Expr> {
        self.active(m).iter().map(|e| self.read(e.text(), space, params)).collect()
    }

    /// Entries whose printed form differs from the corrected one, as
    /// `(printed, corrected)` pairs.
    pub fn errata(&self, space: &JetSpace, params: &BTreeMap<String, Rat>, m: usize) -> Vec<(Expr, Expr)> {
        self.active(m)
            .iter()
            .chain(self.template.iter())
            .filter(|e| e.corrected.is_some())
            .map(|e| (self.expand_template(e.printed, space, params), self.expand_template(e.text(), space, params)))
            .collect()
    }

    fn expand_template(&self, text: &str, space: &JetSpace, params: &BTreeMap<String, Rat>) -> Expr {
        let mut t = text.to_string();
        for (k, e) in self.entries.iter().take(2).enumerate() {
            t = t.replace(&format!("{{v{}}}", k + 1), &format!("({})", e.text()));
        }
        self.read(&t, space, params)
    }

    pub fn template_expr(&self, space: &JetSpace, params: &BTreeMap<String, Rat>) -> Option<Expr> {
        self.template.map(|e| self.expand_template(e.text(), space, params))
    }
}

pub fn fixtures() -> &'static [Fixture] {
    FIXTURES
}

pub fn fixture(algebra: &str, table: Table) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.algebra == algebra && f.table == table)
}

pub fn table_rows(table: Table) -> Vec<&'static Fixture> {
    FIXTURES.iter().filter(|f| f.table == table).collect()
}

const ALL_PLAIN_2: &[Entry] = &[
    ok("y1"), ok("u"), ok("u_x1"), ok("u_x2"), ok("u_y1"), ok("u_x1x1"), ok("u_x1x2"), ok("u_x2x2"),
    ok("u_x1y1"), ok("u_x2y1"), ok("u_y1y1"),
];

const ALL_PLAIN_3: &[Entry] = &[
    ok("y1"), ok("u"), ok("u_x1"), ok("u_x2"), ok("u_x3"), ok("u_y1"), ok("u_x1x1"), ok("u_x1x2"),
    ok("u_x1x3"), ok("u_x2x2"), ok("u_x2x3"), ok("u_x3x3"), ok("u_x1y1"), ok("u_x2y1"), ok("u_x3y1"),
    ok("u_y1y1"),
];

macro_rules! u7_11 {
    () => {
        "u_x1x1*cos(x3)^2/cos(x2)^2 - u_x1x2*sin(2*x3)/cos(x2) + 2*u_x1x3*tan(x2)*cos(x3)^2/cos(x2) \
    + u_x2x2*sin(x3)^2 - u_x2x3*tan(x2)*sin(2*x3) - u_x1*tan(x2)*sin(2*x3)/cos(x2) - u_x2*tan(x2)*cos(x3)^2 \
    - u_x3*(1/2 + tan(x2)^2)*sin(2*x3)"
    };
}
macro_rules! u7_12 {
    () => {
        "u_x1x1*sin(2*x3)/(2*cos(x2)^2) + u_x1x2*cos(2*x3)/cos(x2) + u_x1x3*tan(x2)*sin(2*x3)/cos(x2) \
    - u_x2x2*sin(2*x3)/2 + u_x2x3*tan(x2)*cos(2*x3) + u_x1*tan(x2)*cos(2*x3)/cos(x2) - u_x2*tan(x2)*sin(2*x3)/2 \
    + u_x3*(1/2 + tan(x2)^2)*cos(2*x3)"
    };
}
macro_rules! u7_22 {
    () => {
        "u_x1x1*sin(x3)^2/cos(x2)^2 + u_x1x2*sin(2*x3)/cos(x2) + 2*u_x1x3*tan(x2)*sin(x3)^2/cos(x2) \
    + u_x2x2*cos(x3)^2 + u_x2x3*tan(x2)*sin(2*x3) + u_x1*tan(x2)*sin(2*x3)/cos(x2) - u_x2*tan(x2)*sin(x3)^2 \
    + u_x3*(1/2 + tan(x2)^2)*sin(2*x3)"
    };
}

static FIXTURES: &[Fixture] = &[
    Fixture {
        algebra: "g1",
        table: Table::OneD,
        entries: &[ok("y1"), ok("u"), ok("u_x1"), ok("u_y1"), ok("u_x1x1"), ok("u_x1y1"), ok("u_y1y1")],
        template: None,
    },
    Fixture { algebra: "2g1", table: Table::TwoDFree, entries: ALL_PLAIN_2, template: None },
    Fixture {
        algebra: "g2",
        table: Table::TwoDFree,
        entries: &[
            ok("y1"), ok("u"), ok("exp(x2)*u_x1"), ok("u_x2"), ok("u_y1"), ok("exp(2*x2)*u_x1x1"),
            ok("exp(x2)*(u_x1x2 + u_x1/2)"), ok("u_x2x2"), ok("exp(x2)*u_x1y1"), ok("u_x2y1"), ok("u_y1y1"),
        ],
        template: None,
    },
    Fixture { algebra: "3g1", table: Table::ThreeDFree, entries: ALL_PLAIN_3, template: None },
    Fixture {
        algebra: "g1_g2",
        table: Table::ThreeDFree,
        entries: &[
            ok("y1"), ok("u"), ok("exp(x2)*u_x1"), ok("u_x2"), ok("u_x3"), ok("u_y1"), ok("exp(2*x2)*u_x1x1"),
            ok("exp(x2)*(u_x1x2 + u_x1/2)"), ok("exp(x2)*u_x1x3"), ok("u_x2x2"), ok("u_x2x3"), ok("u_x3x3"),
            ok("exp(x2)*u_x1y1"), ok("u_x2y1"), ok("u_x3y1"), ok("u_y1y1"),
        ],
        template: None,
    },
    Fixture {
        algebra: "g3_1",
        table: Table::ThreeDFree,
        entries: &[
            ok("y1"), ok("u"), ok("u_x1"), ok("x3*u_x1 + u_x2"), ok("u_x3"), ok("u_y1"), ok("u_x1x1"),
            ok("x3*u_x1x1 + u_x1x2"), ok("u_x1x3"), ok("x3^2*u_x1x1 + 2*x3*u_x1x2 + u_x2x2"),
            ok("x3*u_x1x3 + u_x2x3 + u_x1/2"), ok("u_x3x3"), ok("u_x1y1"), ok("x3*u_x1y1 + u_x2y1"),
            ok("u_x3y1"), ok("u_y1y1"),
        ],
        template: None,
    },
    Fixture {
        algebra: "g3_2",
        table: Table::ThreeDFree,
        entries: &[
            ok("y1"), ok("u"), ok("exp(x3)*u_x1"), ok("exp(x3)*(x3*u_x1 + u_x2)"), ok("u_x3"), ok("u_y1"),
            ok("exp(2*x3)*u_x1x1"), ok("exp(2*x3)*(x3*u_x1x1 + u_x1x2)"), ok("exp(x3)*(u_x1x3 + u_x1/2)"),
            ok("u_x3x3"), ok("exp(x3)*u_x1y1"), ok("exp(2*x3)*(x3^2*u_x1x1 + 2*x3*u_x1x2 + u_x2x2)"),
            ok("exp(x3)*x3*(u_x1x3 + u_x1/2) + exp(x3)*(u_x2x3 + (u_x1 + u_x2)/2)"),
            ok("exp(x3)*(x3*u_x1y1 + u_x2y1)"), ok("u_x3y1"), ok("u_y1y1"),
        ],
        template: None,
    },
    Fixture {
        algebra: "g3_3",
        table: Table::ThreeDFree,
        entries: &[
            ok("y1"), ok("u"), ok("exp(x3)*u_x1"), ok("exp(x3)*u_x2"), ok("u_x3"), ok("u_y1"),
            ok("exp(2*x3)*u_x1x1"), ok("exp(2*x3)*u_x1x2"), ok("exp(x3)*(u_x1x3 + u_x1/2)"),
            ok("exp(2*x3)*u_x2x2"), ok("exp(x3)*(u_x2x3 + u_x2/2)"), ok("u_x3x3"), ok("exp(x3)*u_x1y1"),
            ok("exp(x3)*u_x2y1"), ok("u_x3y1"), ok("u_y1y1"),
        ],
        template: None,
    },
    Fixture {
        algebra: "g3_4",
        table: Table::ThreeDFree,
        entries: &[
            ok("y1"), ok("u"), ok("exp(x3)*u_x1"), ok("exp(h*x3)*u_x2"), ok("u_x3"), ok("u_y1"),
            ok("exp(2*x3)*u_x1x1"), ok("exp((1 + h)*x3)*u_x1x2"), ok("exp(x3)*(u_x1x3 + u_x1/2)"),
            ok("exp(2*h*x3)*u_x2x2"), ok("exp(h*x3)*(u_x2x3 + h*u_x2/2)"), ok("u_x3x3"), ok("exp(x3)*u_x1y1"),
            ok("exp(h*x3)*u_x2y1"), ok("u_x3y1"), ok("u_y1y1"),
        ],
        template: None,
    },
    Fixture {
        algebra: "g3_5",
        table: Table::ThreeDFree,
        entries: &[
            ok("y1"), ok("u"), ok("u_x3"), ok("u_y1"), ok("exp(2*p*x3)*(u_x1x1 + u_x2x2)"),
            ok("exp(p*x3)*(u_x1*cos(x3) - u_x2*sin(x3))"), ok("exp(p*x3)*(u_x1*sin(x3) + u_x2*cos(x3))"),
            ok("exp(2*p*x3)*((u_x1x1 - u_x2x2)*cos(2*x3) - 2*u_x1x2*sin(2*x3))"),
            ok("exp(2*p*x3)*((u_x1x1 - u_x2x2)*sin(2*x3) + 2*u_x1x2*cos(2*x3))"),
            ok("exp(p*x3)*((u_x1x3 + (p*u_x1 - u_x2)/2)*cos(x3) - (u_x2x3 + (p*u_x2 + u_x1)/2)*sin(x3))"),
            ok("exp(p*x3)*((u_x1x3 + (p*u_x1 - u_x2)/2)*sin(x3) + (u_x2x3 + (p*u_x2 + u_x1)/2)*cos(x3))"),
            ok("exp(p*x3)*(u_x1y1*cos(x3) - u_x2y1*sin(x3))"), ok("exp(p*x3)*(u_x1y1*sin(x3) + u_x2y1*cos(x3))"),
            ok("u_x3x3"), ok("u_x3y1"), ok("u_y1y1"),
        ],
        template: None,
    },
    Fixture {
        algebra: "g3_6",
        table: Table::ThreeDFree,
        entries: &[
            ok("y1"), ok("u"), ok("exp(x2)*u_x1 + 2*x3*u_x2 + x3^2*u_x3"), ok("u_x2 + x3*u_x3"), ok("u_x3"),
            ok("u_y1"),
            ok("exp(2*x2)*u_x1x1/4 + exp(x2)*x3*(u_x1x2 + (x3*u_x1x3 + u_x1)/2) \
                + x3^2*(x3*u_x2x3 + u_x2x2 + (u_x2 + x3*u_x3)/2 + x3^2*u_x3x3/4)"),
            ok("exp(x2)*(u_x1x2 + x3*u_x1x3 + u_x1/2) + x3^3*u_x3x3 + 3*x3^2*(u_x2x3 + u_x3/2) + x3*(2*u_x2x2 + u_x2)"),
            ok("exp(x2)*u_x1x3 + x3^2*u_x3x3 + x3*(2*u_x2x3 + u_x3) + u_x2"),
            ok("x3^2*u_x3x3 + x3*(2*u_x2x3 + u_x3) + u_x2x2"), ok("x3*u_x3x3 + u_x2x3 + u_x3/2"), ok("u_x3x3"),
            ok("x3*u_x3y1 + u_x2y1"), ok("exp(x2)*u_x1y1 + 2*x3*u_x2y1 + x3^2*u_x3y1"), ok("u_x3y1"),
            ok("u_y1y1"),
        ],
        template: None,
    },
    Fixture {
        algebra: "g3_7",
        table: Table::ThreeDFree,
        entries: &[
            ok("y1"), ok("u"), ok("u_y1"), ok("u_x3"),
            ok("u_x1*cos(x3)/cos(x2) - u_x2*sin(x3) + u_x3*tan(x2)*cos(x3)"),
            ok("u_x1*sin(x3)/cos(x2) + u_x2*cos(x3) + u_x3*tan(x2)*sin(x3)"),
            fix(u7_11!(), concat!(u7_11!(), " + ", "u_x3x3*tan(x2)^2*cos(x3)^2")),
            fix(u7_12!(), concat!(u7_12!(), " + ", "u_x3x3*sin(2*x3)*tan(x2)^2/2")),
            fix(u7_22!(), concat!(u7_22!(), " + ", "u_x3x3*tan(x2)^2*sin(x3)^2")),
            ok("u_x3x3"), ok("u_x3y1"), ok("u_y1y1"),
            ok("u_x1x3*cos(x3)/cos(x2) - u_x2x3*sin(x3) + u_x3x3*cos(x3)*tan(x2) - u_x1*sin(x3)/(2*cos(x2)) \
                - u_x2*cos(x3)/2 - u_x3*sin(x3)*tan(x2)/2"),
            ok("u_x1x3*sin(x3)/cos(x2) + u_x2x3*cos(x3) + u_x3x3*sin(x3)*tan(x2) + u_x1*cos(x3)/(2*cos(x2)) \
                - u_x2*sin(x3)/2 + u_x3*cos(x3)*tan(x2)/2"),
            ok("u_x1y1*cos(x3)/cos(x2) - u_x2y1*sin(x3) + u_x3y1*cos(x3)*tan(x2)"),
            ok("u_x1y1*sin(x3)/cos(x2) + u_x2y1*cos(x3) + u_x3y1*sin(x3)*tan(x2)"),
        ],
        template: None,
    },
    Fixture {
        algebra: "2g1",
        table: Table::TwoDTransitive,
        entries: &[ok("u_x"), ok("u_xx")],
        template: Some(ok("u_xx + b({v1})")),
    },
    Fixture {
        algebra: "g2",
        table: Table::TwoDTransitive,
        entries: &[ok("exp(u)*u_x"), ok("exp(2*u)*u_xx")],
        template: Some(ok("u_xx + exp(-2*u)*b({v1})")),
    },
    Fixture {
        algebra: "3g1",
        table: Table::ThreeDTransitive,
        entries: &[ok("u_x"), ok("u_y"), ok("u_xx"), ok("u_xy"), ok("u_yy")],
        template: Some(ok("u_xx + a_1({v1}, {v2})*u_xy + a_2({v1}, {v2})*u_yy + b({v1}, {v2})")),
    },
    Fixture {
        algebra: "g1_g2",
        table: Table::ThreeDTransitive,
        entries: &[ok("exp(y)*u_x"), ok("u_y"), ok("exp(2*y)*u_xx"), ok("exp(y)*u_xy"), ok("u_yy")],
        template: Some(ok("u_xx + exp(-y)*a_1({v1}, {v2})*u_xy + exp(-2*y)*a_2({v1}, {v2})*u_yy \
            + exp(-2*y)*b({v1}, {v2})")),
    },
    Fixture {
        algebra: "g3_1",
        table: Table::ThreeDTransitive,
        entries: &[ok("u_x - y"), ok("u_y"), ok("u_xx"), ok("u_xy"), ok("u_yy")],
        template: Some(ok("u_xx + a_1({v1}, {v2})*u_xy + a_2({v1}, {v2})*u_yy + b({v1}, {v2})")),
    },
    Fixture {
        algebra: "g3_2",
        table: Table::ThreeDTransitive,
        entries: &[ok("exp(-x)*u_x"), ok("u_y - x"), ok("exp(-x)*u_xx"), ok("u_xy"), ok("exp(x)*u_yy")],
        template: Some(fix(
            "exp(-x)*u_xx + a_1({v1}, {v2})*u_xy + a_2({v1}, {v2})*u_yy + b({v1}, {v2})",
            "exp(-x)*u_xx + a_1({v1}, {v2})*u_xy + a_2({v1}, {v2})*exp(x)*u_yy + b({v1}, {v2})",
        )),
    },
    Fixture {
        algebra: "g3_3",
        table: Table::ThreeDTransitive,
        entries: &[ok("exp(u)*u_x"), ok("exp(u)*u_y"), ok("exp(2*u)*u_xx"), ok("exp(2*u)*u_xy"), ok("exp(2*u)*u_yy")],
        template: Some(fix(
            "u_xx + a_1({v1}, {v2}) + a_2({v1}, {v2})*u_yy + exp(-2*u)*b({v1}, {v2})",
            "u_xx + a_1({v1}, {v2})*u_xy + a_2({v1}, {v2})*u_yy + exp(-2*u)*b({v1}, {v2})",
        )),
    },
    Fixture {
        algebra: "g3_4",
        table: Table::ThreeDTransitive,
        entries: &[
            ok("exp(u)*u_x"), ok("exp(h*u)*u_y"), ok("exp(2*u)*u_xx"), ok("exp((1 + h)*u)*u_xy"),
            ok("exp(2*h*u)*u_yy"),
        ],
        template: Some(fix(
            "u_xx + exp((h - 1)*u)*a_1({v1}, {v2}) + exp(2*(h - 1)*u)*a_2({v1}, {v2})*u_yy \
                + exp(-2*u)*b({v1}, {v2})",
            "u_xx + exp((h - 1)*u)*a_1({v1}, {v2})*u_xy + exp(2*(h - 1)*u)*a_2({v1}, {v2})*u_yy \
                + exp(-2*u)*b({v1}, {v2})",
        )),
    },
    Fixture {
        algebra: "g3_5",
        table: Table::ThreeDTransitive,
        entries: &[
            ok("exp(p*u)*(u_x*cos(u) - u_y*sin(u))"),
            ok("exp(p*u)*(u_x*sin(u) + u_y*cos(u))"),
            ok("exp(2*p*u)*(u_xx + u_yy)"),
            ok("exp(2*p*u)*((u_xx - u_yy)*cos(2*u) - 2*u_xy*sin(2*u))"),
            fix(
                "exp(2*p*u)*((u_xx - u_yy)*sin(2*u) + 2*u_xy*sin(2*u))",
                "exp(2*p*u)*((u_xx - u_yy)*sin(2*u) + 2*u_xy*cos(2*u))",
            ),
        ],
        template: Some(ok("u_xx + u_yy + exp(-2*p*u)*b({v1}, {v2}) + a_1({v1}, {v2})*(u_xx - u_yy)*cos(2*u) \
            - 2*a_1({v1}, {v2})*u_xy*sin(2*u) + a_2({v1}, {v2})*(u_xx - u_yy)*sin(2*u) \
            + 2*a_2({v1}, {v2})*u_xy*cos(2*u)")),
    },
    Fixture {
        algebra: "g3_6",
        table: Table::ThreeDTransitive,
        entries: &[
            ok("exp(y)*u_x + u_y^2"),
            ok("u_y - u"),
            ok("u_yy - u"),
            ok("exp(y)*u_xy + 2*u*u_yy - u^2"),
            ok("exp(2*y)*u_xx + 2*u*(u*(2*u_yy + u_y - u) + exp(y)*(u_x + 2*u_xy))"),
        ],
        template: Some(ok("exp(2*y)*u_xx + 4*u*exp(y)*u_xy + 4*u^2*u_yy + 2*exp(y)*u_x*u_y + 4*u*u_y^2 \
            - 4*u^2*u_y + a_1({v1}, {v2})*(exp(y)*u_xy + 2*u*u_yy - u^2) + a_2({v1}, {v2})*(u_yy - u) \
            + b({v1}, {v2})")),
    },
    Fixture {
        algebra: "g3_7",
        table: Table::ThreeDTransitive,
        entries: &[
            ok("u_x*cos(u)/cos(y) - u_y*sin(u) - cos(u)*tan(y)"),
            fix(
                "u_x*sin(u)/cos(y)*u_x + u_y*cos(u) - sin(u)*tan(y)",
                "u_x*sin(u)/cos(y) + u_y*cos(u) - sin(u)*tan(y)",
            ),
            ok(SO3_LAPLACE),
            ok(SO3_V13),
            ok(SO3_V23),
        ],
        template: Some(ok("u_xx/cos(y)^2 + u_yy - u_y*tan(y) + b({v1}, {v2}) \
            + (a_1({v1}, {v2})*cos(2*u) - a_2({v1}, {v2})*sin(2*u)) \
              *(u_xx/cos(y)^2 - u_yy - 2*u_x*u_y/cos(y) + u_y*tan(y)) \
            + (a_1({v1}, {v2})*sin(2*u) + a_2({v1}, {v2})*cos(2*u)) \
              *(-2*u_xy/cos(y) + u_y^2 + (1 - u_x^2)/cos(y)^2)")),
    },
];

pub const SO3_LAPLACE: &str = "u_xx/cos(y)^2 + u_yy - u_y*tan(y)";
pub const SO3_V13: &str = "cos(2*u)*(u_xx/cos(y)^2 - u_yy - 2*u_x*u_y/cos(y) + u_y*tan(y)) \
    + sin(2*u)*(-2*u_xy/cos(y) + u_y^2 + (1 - u_x^2)/cos(y)^2)";
pub const SO3_V23: &str = "-sin(2*u)*(u_xx/cos(y)^2 - u_yy - 2*u_x*u_y/cos(y) + u_y*tan(y)) \
    + cos(2*u)*(-2*u_xy/cos(y) + u_y^2 + (1 - u_x^2)/cos(y)^2)";

/// The worked so(3) example before recombination: `v_1, v_2, v_12, v_13, v_23`.
pub const SO3_ORIGINAL: [&str; 5] = [
    "u_x*cos(u)/cos(y) - u_y*sin(u) - cos(u)*tan(y)",
    "u_x*sin(u)/cos(y) + u_y*cos(u) - sin(u)*tan(y)",
    "(u_xx*u_y^2 + 2*u_xy*u_y*(sin(y) - u_x) + u_yy*(u_x - sin(y))^2 + (1 - u_y^2)*u_y*sin(2*y)/2 \
        - 3*u_x*u_y*cos(y) - 2*(1 + u_x^2)*u_y*tan(y) + 4*u_x*u_y/cos(y))/cos(y)^2",
    "u_xx*cos(u)^2/cos(y)^2 - u_xy*sin(2*u)/cos(y) + u_yy*sin(u)^2 + (u_y^2 - u_x^2/cos(y)^2)*sin(2*u)/2 \
        - u_x*u_y*cos(2*u)/cos(y) - u_y*tan(y)*sin(u)^2 + sin(2*u)/(1 + cos(2*y))",
    "u_xx*sin(u)^2/cos(y)^2 + u_xy*sin(2*u)/cos(y) + u_yy*cos(u)^2 - ((1 - u_x^2)/cos(y)^2 + u_y^2)*sin(2*u)/2 \
        + u_x*u_y*cos(2*u)/cos(y) - u_y*cos(u)^2*tan(y)",
];

/// The recombined invariants `ṽ_12, ṽ_13, ṽ_23`.
pub const SO3_RECOMBINED: [&str; 3] = [SO3_LAPLACE, SO3_V13, SO3_V23];

/// `ξ` and `η` of the worked so(3) example over `z1, z2, z3`.
pub const SO3_XI: [[&str; 3]; 3] = [
    ["1", "0", "0"],
    ["sin(z1)*tan(z2)", "cos(z1)", "sin(z1)/cos(z2)"],
    ["cos(z1)*tan(z2)", "-sin(z1)", "cos(z1)/cos(z2)"],
];
pub const SO3_ETA: [[&str; 3]; 3] = [
    ["cos(z3)/cos(z2)", "-sin(z3)", "cos(z3)*tan(z2)"],
    ["sin(z3)/cos(z2)", "cos(z3)", "sin(z3)*tan(z2)"],
    ["0", "0", "1"],
];
