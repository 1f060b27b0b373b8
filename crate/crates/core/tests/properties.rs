mod invariants;

use invariants::CHECKS;

#[test]
fn engine_invariants_hold() {
    for (name, check) in CHECKS {
        for seed in 0..300 {
            if let Err(e) = check(seed) {
                panic!("{name}, seed {seed}: {e}");
            }
        }
    }
}
