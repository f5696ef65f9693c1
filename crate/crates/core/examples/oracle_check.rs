//! Cross-checking the fast algorithms against brute force on small graphs.

use signed_teams::compat::{build_relation, sp_sign_counts, RelationKind, RelationOptions};
use signed_teams::harness::{gnp_connected, stream_rng};
use signed_teams::oracle::{oracle_relation, shortest_path_sign_counts, OracleBudget};

fn main() {
    let budget = OracleBudget::default();
    let mut rng = stream_rng(5, 0);
    let (mut pairs, mut mismatches) = (0, 0);
    for trial in 0..50 {
        let g = gnp_connected(10, 0.3, 0.4, &mut rng);
        for u in g.nodes() {
            let fast = sp_sign_counts(&g, u).unwrap();
            for v in g.nodes() {
                let (p, n, _) = shortest_path_sign_counts(&g, u, v, &budget).unwrap();
                pairs += 1;
                mismatches += usize::from((fast.pos[v.index()], fast.neg[v.index()]) != (p, n));
            }
        }
        let opts = RelationOptions {
            sbp_max_path_len: Some(9),
            ..RelationOptions::default()
        };
        let fast = build_relation(&g, RelationKind::Sbp, &opts).unwrap();
        let slow = oracle_relation(&g, RelationKind::Sbp, &budget).unwrap();
        if !fast.same_pairs(&slow) {
            println!("trial {trial}: balanced-path relations differ");
            mismatches += 1;
        }
    }
    println!("{pairs} pairs checked, {mismatches} mismatches");
}
