//! Matrix groups with documented expected behavior, shipped for the CLI and
//! the test suites.

use crate::arith::{FieldDesc, Mat, ScalarGrammar};
use crate::error::{Error, Result};
use crate::group::MatGroup;

pub struct FixtureInfo {
    pub name: &'static str,
    pub description: &'static str,
}

pub fn fixture_list() -> Vec<FixtureInfo> {
    vec![
        FixtureInfo {
            name: "heisenberg",
            description: "upper unitriangular 3x3 over Z, gens x = I+E12, y = I+E23; \
                          nilpotent, center <[x,y]> is distorted (l(c^n) ~ sqrt(n))",
        },
        FixtureInfo {
            name: "bs12",
            description: "BS(1,2) = <a, t | t a t^-1 = a^2> in GL(2,Q); cyclic <a> is \
                          exponentially distorted (tau_hat(a) -> 0)",
        },
        FixtureInfo {
            name: "lamplighter2",
            description: "C_2 wr Z in GL(2,F_2(t)): lamp [[1,1],[0,1]] and shift \
                          [[t,0],[0,1]]; infinite torsion subgroup, abelian subgroups \
                          not finitely generated",
        },
        FixtureInfo {
            name: "lamplighter3",
            description: "C_3 wr Z in GL(2,F_3(t)), same shape as lamplighter2",
        },
        FixtureInfo {
            name: "zsquare",
            description: "free abelian rank 2 as diag(2,1), diag(1,2) in GL(2,Q); \
                          undistorted, tau_hat = 1 and fitted k = 1 on every box",
        },
        FixtureInfo {
            name: "free2",
            description: "free group of rank 2 (Sanov): [[1,2],[0,1]], [[1,0],[2,1]]; \
                          sphere sizes 4 * 3^(d-1)",
        },
        FixtureInfo {
            name: "sl2f2_laurent",
            description: "subgroup of SL(2, F_2[t,1/t]) generated by diag(t,1/t) and \
                          [[1,1],[0,1]]; acts on the product of the t-adic and \
                          degree-valuation trees with finite point stabilizers",
        },
    ]
}

pub fn fixture(name: &str) -> Result<MatGroup> {
    let mk = |p: u64, dim: usize, gens: &[&[&str]], label: &str| -> Result<MatGroup> {
        let grammar = ScalarGrammar::for_char(p)?;
        let mats = gens
            .iter()
            .map(|rows| {
                let entries = rows
                    .iter()
                    .map(|s| grammar.parse_scalar(s))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Mat::new(dim, entries))
            })
            .collect::<Result<Vec<_>>>()?;
        let field = if p == 0 {
            FieldDesc::rational()
        } else {
            FieldDesc { characteristic: p, extension_degree: 1, has_transcendental: true }
        };
        MatGroup::new(mats, field, Some(label.to_string()))
    };
    match name {
        "heisenberg" => mk(
            0,
            3,
            &[
                &["1", "1", "0", "0", "1", "0", "0", "0", "1"],
                &["1", "0", "0", "0", "1", "1", "0", "0", "1"],
            ],
            "heisenberg",
        ),
        "bs12" => mk(
            0,
            2,
            &[&["1", "1", "0", "1"], &["2", "0", "0", "1"]],
            "bs12",
        ),
        "lamplighter2" => mk(
            2,
            2,
            &[&["1", "1", "0", "1"], &["t", "0", "0", "1"]],
            "lamplighter2",
        ),
        "lamplighter3" => mk(
            3,
            2,
            &[&["1", "1", "0", "1"], &["t", "0", "0", "1"]],
            "lamplighter3",
        ),
        "zsquare" => mk(
            0,
            2,
            &[&["2", "0", "0", "1"], &["1", "0", "0", "2"]],
            "zsquare",
        ),
        "free2" => mk(
            0,
            2,
            &[&["1", "2", "0", "1"], &["1", "0", "2", "1"]],
            "free2",
        ),
        "sl2f2_laurent" => mk(
            2,
            2,
            &[&["t", "0", "0", "1 | t"], &["1", "1", "0", "1"]],
            "sl2f2_laurent",
        ),
        other => Err(Error::domain(format!("unknown fixture '{other}'"))),
    }
}
