#![allow(dead_code)]

use zperiod::ade::AdeType;
use zperiod::families::{family_a_pow_d, family_ad_pow, family_ee, tensor, twist};
use zperiod::Bigraph;

pub fn small_types() -> Vec<AdeType> {
    let mut v: Vec<AdeType> = (1..=5).map(AdeType::a).collect();
    v.extend([AdeType::d(4), AdeType::d(5), AdeType::e(6)]);
    v
}

/// The infinite-family sweep: tensors over {A1..A5, D4, D5, E6}, twists over
/// {A2..A5, D4, D5}, both folded A/D families for 2 ≤ m, n ≤ 5, EE(2..5).
pub fn family_sweep() -> Vec<(String, Bigraph)> {
    let mut out = Vec::new();
    for &a in &small_types() {
        for &b in &small_types() {
            out.push((format!("tensor({a},{b})"), tensor(a, b)));
        }
    }
    for t in [AdeType::a(2), AdeType::a(3), AdeType::a(4), AdeType::a(5), AdeType::d(4), AdeType::d(5)] {
        out.push((format!("twist({t})"), twist(t)));
    }
    for m in 2..=5 {
        for n in 2..=5 {
            out.push((format!("ADpow({m},{n})"), family_ad_pow(m, n).unwrap()));
            out.push((format!("ApowD({m},{n})"), family_a_pow_d(m, n).unwrap()));
        }
    }
    for n in 2..=5 {
        out.push((format!("EE({n})"), family_ee(n).unwrap()));
    }
    out
}
