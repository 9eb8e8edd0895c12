//! One generated case per identity, verified end to end.

use hypermat::verify::{gen_case, verify_case, IdentityId};

#[test]
fn every_identity_verifies_on_one_case() {
    for id in IdentityId::ALL {
        for dim in [1usize, 2, 3] {
            let tol = match id {
                IdentityId::T3
                | IdentityId::C2
                | IdentityId::T6
                | IdentityId::C3
                | IdentityId::T5
                | IdentityId::T7Proof
                | IdentityId::T7Stmt => 1e-6,
                _ => 1e-7,
            };
            let case = gen_case(id, 4242, dim - 1, dim, tol)
                .unwrap_or_else(|e| panic!("{}: generation failed: {e}", id.as_str()));
            let rep = verify_case(&case);
            assert!(
                rep.passed,
                "{} dim {dim}: residual {:?} (lhs: {}, rhs: {})",
                id.as_str(),
                rep.residual,
                rep.lhs_route,
                rep.rhs_route
            );
            for c in &rep.checks {
                assert!(
                    c.passed,
                    "{} dim {dim}: check {} residual {:?}",
                    id.as_str(),
                    c.name,
                    c.residual
                );
            }
        }
    }
}
