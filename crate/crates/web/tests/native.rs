//! Native runs of the browser bindings. Error paths build a `JsError`, which
//! needs a JavaScript host, so only successful calls are exercised here.

use fireplan_web::{branching_factor, fw_weight_map, FireDemo};

fn ok<T, E>(r: Result<T, E>) -> T {
    match r {
        Ok(v) => v,
        Err(_) => panic!("binding returned an error"),
    }
}

#[test]
fn weight_map_covers_the_grid() {
    let w = ok(fw_weight_map(8));
    assert_eq!(w.len(), 64);
    assert!(w.iter().all(|v| v.is_finite()));
}

#[test]
fn branching_factor_returns_both_forms() {
    let b = ok(branching_factor(275.5, 4));
    assert_eq!(b.len(), 2);
    assert!((2.1e8..2.6e8).contains(&b[0]));
    assert!(b[1] > b[0]);
}

#[test]
fn demo_runs_to_extinction() {
    for policy in ["random", "fw", "mcts", "mo"] {
        let mut demo = ok(FireDemo::new(6, 3, 2));
        assert_eq!(demo.width(), 6);
        assert_eq!(demo.burning().len(), 36);
        let mut guard = 0;
        while !demo.done() {
            ok(demo.step(policy));
            assert_eq!(demo.last_action().len(), 3, "{policy}");
            assert!(demo.fuel().len() == 36);
            guard += 1;
            assert!(guard < 500, "{policy} never finished");
        }
        assert_eq!(demo.steps(), guard);
        assert!(demo.total_reward() <= 0.0);
        ok(demo.step(policy));
        assert_eq!(demo.steps(), guard);
    }
}
