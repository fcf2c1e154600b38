//! TMSS/coherent Bhattacharyya exponent ratios along both orders of limits.

use super::plan::Quantity;
use super::run::{Point, Row};
use crate::target::TargetModel;
use crate::transmitters::TransmitterKind;

pub const LIMIT_N_B: f64 = 1e4;

/// `N_S` held fixed while `κ` shrinks.
pub const KAPPA_FIRST_NS: [f64; 3] = [1e-2, 1e-3, 1e-4];
pub const KAPPA_FIRST_KAPPA: [f64; 5] = [1e-4, 1e-6, 1e-8, 1e-10, 1e-12];
/// `κ` held fixed while `N_S` shrinks.
pub const NS_FIRST_KAPPA: [f64; 3] = [1e-2, 1e-3, 1e-4];
pub const NS_FIRST_NS: [f64; 4] = [1e-6, 1e-8, 1e-10, 1e-12];

/// Rows carry the path name (`kappa_first` or `ns_first`) in `flags`.
pub fn limit_order_study(model: TargetModel) -> Vec<Row> {
    let mut rows = Vec::new();
    let mut push = |n_s: f64, kappa: f64, path: &str| {
        let p = Point {
            kind: TransmitterKind::Tmss,
            n_s,
            n_b: LIMIT_N_B,
            kappa,
            model,
        };
        for mut r in p.evaluate(&[Quantity::BhattacharyyaRatio]) {
            r.flags.insert(0, path.to_string());
            rows.push(r);
        }
    };
    for n_s in KAPPA_FIRST_NS {
        for kappa in KAPPA_FIRST_KAPPA {
            push(n_s, kappa, "kappa_first");
        }
    }
    for kappa in NS_FIRST_KAPPA {
        for n_s in NS_FIRST_NS {
            push(n_s, kappa, "ns_first");
        }
    }
    rows
}
