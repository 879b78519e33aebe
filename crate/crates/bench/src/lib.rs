//! Shared fixtures for the `kernels` benchmarks: one model over `F_{5^5}`
//! and non-trap places at tower level 2 that are known to eliminate.

use ecdlog_core::divisor::Divisor;
use ecdlog_core::model::Model;
use ecdlog_core::policy::Policy;
use ecdlog_core::rng::{self, Rng};
use ecdlog_core::{elim32, elim43};

pub const LEVEL: usize = 2;

pub struct Fixture {
    pub model: Model,
    pub policy: Policy,
    pub place3: Divisor,
    pub place4: Divisor,
}

impl Fixture {
    pub fn new() -> Fixture {
        let model = Model::build(5, 5, Some(1)).expect("model for 5^5");
        let policy = Policy::default();
        let mut r = rng::stream(0, "bench-fixture");
        let place3 = eliminable(&model, &policy, 3, &mut r);
        let place4 = eliminable(&model, &policy, 4, &mut r);
        Fixture { model, policy, place3, place4 }
    }
}

impl Default for Fixture {
    fn default() -> Fixture {
        Fixture::new()
    }
}

fn eliminable(m: &Model, policy: &Policy, deg: usize, r: &mut Rng) -> Divisor {
    let kd = m.level_field(LEVEL).degree();
    loop {
        let d = Divisor::random_place(&m.curve, kd, deg, r);
        // Over F_{5^4} some places have no split point at all; skip those.
        let mut probe = rng::stream(0, "bench-probe");
        let ok = match deg {
            3 => elim32::try_eliminate32(m, LEVEL, &d, &mut probe, policy).is_ok(),
            _ => elim43::try_eliminate43(m, LEVEL, &d, &mut probe, policy).is_ok(),
        };
        if ok {
            return d;
        }
    }
}
