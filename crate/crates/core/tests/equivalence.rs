//! The defining ball/sphere condition agrees with its spectral
//! characterizations, in both directions, on every construction and on
//! random corruptions of each.

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bitrade::construct::{alt_bitrade, lift_to_perfect, mds_bitrade, tensor_combine, MdsVariant};
use bitrade::verify::{
    dist2_count_check, eigen_check, mindist_check, verify_definition, SignedFunction,
};
use bitrade::{Bitrade, BitradeKind, Code};

const CORRUPTIONS: usize = 100;
const SEED: u64 = 31_337;

fn constructions() -> Vec<(String, Bitrade)> {
    let mut out = Vec::new();
    for q in 3..=5 {
        let a = alt_bitrade(q).unwrap();
        out.push((format!("lift(alt({q}))"), lift_to_perfect(&a).unwrap()));
        out.push((format!("alt({q})"), a));
    }
    for q in [4, 5] {
        out.push((
            format!("mds({q},swap)"),
            mds_bitrade(q, MdsVariant::Swap).unwrap(),
        ));
    }
    out.push((
        "mds(5,coset)".into(),
        mds_bitrade(5, MdsVariant::Coset(None)).unwrap(),
    ));
    let a3 = alt_bitrade(3).unwrap();
    let square = tensor_combine(&a3, &a3).unwrap();
    out.push(("lift(alt3⊗alt3)".into(), lift_to_perfect(&square).unwrap()));
    out.push(("alt3⊗alt3".into(), square));
    out
}

/// One support word replaced by a random vertex, deleted, or moved to the
/// other part.
fn corrupt(b: &Bitrade, rng: &mut ChaCha8Rng) -> Bitrade {
    let params = b.params();
    let mut parts = [b.t0().clone(), b.t1().clone()];
    let p = rng.random_range(0..2);
    let w = parts[p].iter().choose(rng).unwrap().clone();
    parts[p].remove(&w);
    match rng.random_range(0..3) {
        0 => loop {
            let x = params.random_word(rng);
            if x != w && !parts[0].contains(&x) && !parts[1].contains(&x) {
                parts[p].insert(x).unwrap();
                break;
            }
        },
        1 => {}
        _ => {
            parts[1 - p].insert(w).unwrap();
        }
    }
    let [t0, t1]: [Code; 2] = parts;
    Bitrade::candidate(t0, t1, b.kind()).unwrap()
}

/// Verdicts of the definition and of each characterization.
fn verdicts(b: &Bitrade) -> Vec<(&'static str, bool)> {
    let spectral = mindist_check(b).passed
        && eigen_check(&SignedFunction::from_bitrade(b), b.kind().eigenvalue()).passed;
    let mut out = vec![
        ("definition", verify_definition(b).passed),
        ("d=3 and eigen", spectral),
    ];
    if b.kind() == BitradeKind::Spherical {
        out.push(("dist2", dist2_count_check(b).passed));
    }
    out
}

#[test]
fn constructions_satisfy_every_characterization() {
    for (name, b) in constructions() {
        for (oracle, passed) in verdicts(&b) {
            assert!(passed, "{name}: {oracle} rejects a valid bitrade");
        }
    }
}

#[test]
fn corruptions_are_judged_alike() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (name, b) in constructions() {
        let mut rejected = 0;
        for i in 0..CORRUPTIONS {
            let c = corrupt(&b, &mut rng);
            let v = verdicts(&c);
            assert!(
                v.iter().all(|&(_, p)| p == v[0].1),
                "{name} corruption {i}: {v:?}"
            );
            rejected += usize::from(!v[0].1);
        }
        // a single-word change never leaves a valid bitrade of a construction
        assert_eq!(rejected, CORRUPTIONS, "{name}");
    }
}
