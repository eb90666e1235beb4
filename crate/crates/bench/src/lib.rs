//! Shared fixtures for the solver benchmarks.

use vcut_core::driver::{generate_instance, Family, Generated};

/// Deterministic benchmark instances across the supported size range.
pub fn fixtures() -> Vec<(String, Generated)> {
    let mut out = Vec::new();
    for &(n, density) in &[(12usize, 0.3f64), (18, 0.5), (24, 0.8)] {
        let m = (density * (n * (n - 1) / 2) as f64).round() as usize;
        let gen = generate_instance(n, m, 20, Family::Gnm, 0xB5EED + n as u64)
            .expect("benchmark instance");
        out.push((format!("gnm-n{n}-d{density}"), gen));
    }
    out.push((
        "planted-n16".to_string(),
        generate_instance(
            16,
            83,
            8,
            Family::PlantedCut {
                l_size: 4,
                s_size: 3,
            },
            7,
        )
        .expect("planted instance"),
    ));
    out
}
