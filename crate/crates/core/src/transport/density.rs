use std::collections::HashMap;

use num_complex::Complex64;

/// A closed disk in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

/// Fraction of the points of the `eps`-grid inside `window` that lie
/// within `eps` of some hit.
pub fn density_statistic(hits: &[Complex64], window: Disk, eps: f64) -> f64 {
    let cell = |z: Complex64| ((z.re / eps).floor() as i64, (z.im / eps).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<Complex64>> = HashMap::new();
    for &h in hits {
        buckets.entry(cell(h)).or_default().push(h);
    }
    let n = (window.radius / eps).floor() as i64;
    let (mut total, mut covered) = (0usize, 0usize);
    for i in -n..=n {
        for k in -n..=n {
            let g = window.center + Complex64::new(i as f64 * eps, k as f64 * eps);
            if (g - window.center).norm() > window.radius {
                continue;
            }
            total += 1;
            let (ci, ck) = cell(g);
            let hit = (-1..=1).any(|di| {
                (-1..=1).any(|dk| {
                    buckets
                        .get(&(ci + di, ck + dk))
                        .is_some_and(|v| v.iter().any(|h| (h - g).norm() <= eps))
                })
            });
            covered += usize::from(hit);
        }
    }
    if total == 0 {
        0.0
    } else {
        covered as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: Disk = Disk {
        center: Complex64::new(0.0, 0.0),
        radius: 1.0,
    };

    #[test]
    fn empty_and_full() {
        assert_eq!(density_statistic(&[], UNIT, 0.1), 0.0);
        let grid: Vec<Complex64> = (-10..=10)
            .flat_map(|i| (-10..=10).map(move |k| Complex64::new(i as f64 * 0.1, k as f64 * 0.1)))
            .collect();
        assert_eq!(density_statistic(&grid, UNIT, 0.1), 1.0);
    }
}
