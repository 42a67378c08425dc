use std::sync::Arc;

use num_rational::BigRational;

use super::{ChainSpec, Query, QueryKind, Scenario};
use crate::field::ExactScalar;
use crate::linear::{Ket, SpaceLayout, Subsystem};
use crate::propositions::{Alias, Observable, Proposition};

fn monomial(n: i64, d: i64, r: u32) -> ExactScalar {
    ExactScalar::monomial(BigRational::new(n.into(), d.into()), r)
}

fn p(o: &str, l: &str) -> Proposition {
    Proposition::new(o, l)
}

/// The two-lab scenario: coin `L1` in {H, T}, spin `L2` in {up, down},
/// prepared in `Psi = (|H,down> + |T,up> + |T,down>)/sqrt(3)`.
///
/// Observables `A`, `B` measure the lab bases; `X`, `Y` measure the
/// superposition bases `fail = (first + second)/sqrt(2)`,
/// `ok = (first - second)/sqrt(2)` with `(H, T)` and `(down, up)`.
pub fn builtin_scenario() -> Scenario {
    let subsystem = |name: &str, labels: [&str; 2]| Subsystem {
        name: name.into(),
        labels: labels.iter().map(|s| s.to_string()).collect(),
    };
    let layout = SpaceLayout::new(vec![subsystem("L1", ["H", "T"]), subsystem("L2", ["up", "down"])])
        .expect("fixed layout");
    let mut s = Scenario::new(layout).expect("fixed names");
    let layout: Arc<SpaceLayout> = s.layout().clone();

    let third = monomial(1, 3, 3);
    let psi = Ket::on_layout(layout.clone(), vec![ExactScalar::zero(), third.clone(), third.clone(), third])
        .expect("dimension 4");
    s.add_state("Psi", psi).expect("normalized");

    let half = monomial(1, 2, 2);
    let ket = |sub: usize, a: &ExactScalar, b: &ExactScalar| {
        Ket::new(layout.clone(), vec![sub], vec![a.clone(), b.clone()]).expect("dimension 2")
    };
    let observables = [
        Observable::standard(&layout, "A", "L1"),
        Observable::standard(&layout, "B", "L2"),
        Observable::new(
            &layout,
            "X",
            "L1",
            vec![
                ("fail_X".into(), ket(0, &half, &half)),
                ("ok_X".into(), ket(0, &half, &-half.clone())),
            ],
        ),
        // coefficients are listed in (up, down) order
        Observable::new(
            &layout,
            "Y",
            "L2",
            vec![
                ("fail_Y".into(), ket(1, &half, &half)),
                ("ok_Y".into(), ket(1, &-half.clone(), &half)),
            ],
        ),
    ];
    for o in observables {
        s.add_observable(o.expect("orthonormal basis")).expect("fresh name");
    }
    s.add_alias("A", Alias::new("C", &[("h", "H"), ("t", "T")])).expect("bijection");
    s.add_alias("B", Alias::new("S_z", &[("+1/2", "up"), ("-1/2", "down")])).expect("bijection");

    s.add_chain(ChainSpec {
        name: "wigner".into(),
        links: vec![
            (p("X", "ok_X"), p("S_z", "+1/2")),
            (p("S_z", "+1/2"), p("C", "t")),
            (p("C", "t"), p("Y", "fail_Y")),
        ],
    })
    .expect("known propositions");

    let expand = |a: &str, b: &str| QueryKind::Expand {
        state: "Psi".into(),
        observables: vec![a.into(), b.into()],
    };
    let prob = |props: Vec<Proposition>| QueryKind::Prob { state: "Psi".into(), props };
    let queries = [
        ("xy_basis", expand("X", "Y")),
        ("xb_basis", expand("X", "B")),
        ("ba_basis", expand("B", "A")),
        ("ay_basis", expand("A", "Y")),
        ("ok_ok", prob(vec![p("X", "ok_X"), p("Y", "ok_Y")])),
        ("ok_down", prob(vec![p("X", "ok_X"), p("B", "down")])),
        ("up_h", prob(vec![p("B", "up"), p("A", "H")])),
        ("t_ok", prob(vec![p("A", "T"), p("Y", "ok_Y")])),
        ("q_cross", prob(vec![p("X", "ok_X"), p("A", "H")])),
        ("chain_audit", QueryKind::Audit { chain: "wigner".into() }),
        (
            "hv_ok_ok",
            QueryKind::Hv {
                chain: "wigner".into(),
                target: vec![p("X", "ok_X"), p("Y", "ok_Y")],
            },
        ),
        (
            "hv_fail_fail",
            QueryKind::Hv {
                chain: "wigner".into(),
                target: vec![p("X", "fail_X"), p("Y", "fail_Y")],
            },
        ),
    ];
    for (name, kind) in queries {
        s.add_query(Query { name: name.into(), kind }).expect("valid query");
    }
    s
}
