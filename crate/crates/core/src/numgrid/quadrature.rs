use super::GridFunction;

/// Integral of the samples over the grid.
///
/// Periodic grids use the rectangle rule. Non-periodic grids use composite
/// Simpson; with an odd number of intervals the last three are handled by
/// Simpson's 3/8 rule.
pub fn integrate(gf: &GridFunction) -> f64 {
    let grid = gf.grid();
    let h = grid.spacing();
    let y = gf.values();
    if grid.is_periodic() {
        return h * y.iter().sum::<f64>();
    }
    let intervals = y.len() - 1;
    let (simpson_end, tail) = if intervals.is_multiple_of(2) {
        (intervals, 0.0)
    } else {
        (intervals - 3, three_eighths(&y[intervals - 3..], h))
    };
    let mut acc = y[0] + y[simpson_end];
    for (i, v) in y.iter().enumerate().take(simpson_end).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0 + tail
}

fn three_eighths(y: &[f64], h: f64) -> f64 {
    3.0 * h / 8.0 * (y[0] + 3.0 * y[1] + 3.0 * y[2] + y[3])
}

/// `∫ a·b dx` with [`integrate`].
pub fn inner(a: &GridFunction, b: &GridFunction) -> f64 {
    integrate(&(a * b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numgrid::Grid;
    use approx::assert_relative_eq;

    fn sech(x: f64) -> f64 {
        1.0 / x.cosh()
    }

    #[test]
    fn sech_powers() {
        let g = Grid::default_decaying();
        let s2 = GridFunction::from_fn(g, |x| sech(x).powi(2));
        assert!((integrate(&s2) - 2.0 * 40f64.tanh()).abs() < 1e-12);
        let s4 = GridFunction::from_fn(g, |x| sech(x).powi(4));
        assert!((integrate(&s4) - 4.0 / 3.0).abs() < 1e-10);
        assert_eq!(integrate(&GridFunction::zeros(g)), 0.0);
    }

    #[test]
    fn odd_interval_count_uses_three_eighths_tail() {
        // exact for cubics either way
        let g = Grid::new(0.0, 2.0, 20, false).unwrap();
        let f = GridFunction::from_fn(g, |x| x * x * x - x);
        assert_relative_eq!(integrate(&f), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn periodic_rectangle_rule_is_spectral() {
        let g = Grid::new(0.0, 2.0 * std::f64::consts::PI, 64, true).unwrap();
        let f = GridFunction::from_fn(g, |x| x.cos().exp());
        // 2π I₀(1)
        assert_relative_eq!(integrate(&f), 2.0 * std::f64::consts::PI * 1.2660658777520082, epsilon = 1e-12);
    }
}
