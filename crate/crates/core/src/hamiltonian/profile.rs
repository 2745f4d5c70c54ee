use serde::Serialize;

use crate::error::{Error, Result};

use super::chart::ActionAngleChart;

/// `ω(I)` and its scaled Taylor coefficients `b₁ = ω′`, `b₂ = ω″/2`, `b₃ = ω‴/6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyJet {
    pub omega: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

/// Seven-point central differences of `ω` with spacing `2·10⁻³` of the action
/// range, shrunk near the ends of the interval.
pub(crate) fn fd_frequency_jet<C: ActionAngleChart + ?Sized>(
    chart: &C,
    action: f64,
) -> Result<FrequencyJet> {
    chart.check_action(action)?;
    let (lo, hi) = chart.action_range();
    let h = (2e-3 * (hi - lo))
        .min(0.3 * (action - lo))
        .min(0.3 * (hi - action));
    let mut f = [0.0; 7];
    for (j, slot) in f.iter_mut().enumerate() {
        *slot = chart.omega(action + (j as f64 - 3.0) * h)?;
    }
    let d1 = (-f[0] + 9.0 * f[1] - 45.0 * f[2] + 45.0 * f[4] - 9.0 * f[5] + f[6]) / (60.0 * h);
    let d2 = (2.0 * f[0] - 27.0 * f[1] + 270.0 * f[2] - 490.0 * f[3] + 270.0 * f[4] - 27.0 * f[5]
        + 2.0 * f[6])
        / (180.0 * h * h);
    let d3 =
        (f[0] - 8.0 * f[1] + 13.0 * f[2] - 13.0 * f[4] + 8.0 * f[5] - f[6]) / (8.0 * h.powi(3));
    Ok(FrequencyJet {
        omega: f[3],
        b1: d1,
        b2: 0.5 * d2,
        b3: d3 / 6.0,
    })
}

/// Natural frequency along the cell, validated as nonvanishing and monotone.
#[derive(Clone, Copy)]
pub struct FrequencyProfile<'a> {
    chart: &'a dyn ActionAngleChart,
    strictly_monotone: bool,
}

const PROFILE_GRID: usize = 64;

/// Builds the profile of `chart`, rejecting a frequency that vanishes or
/// turns around inside the cell.
pub fn frequency_profile_from_chart(chart: &dyn ActionAngleChart) -> Result<FrequencyProfile<'_>> {
    let (lo, hi) = chart.action_range();
    let mut values = Vec::with_capacity(PROFILE_GRID);
    for j in 0..PROFILE_GRID {
        let i = lo + (hi - lo) * (j as f64 + 0.5) / PROFILE_GRID as f64;
        let w = chart.omega(i)?;
        if w == 0.0 || !w.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "frequency vanishes at I = {i}"
            )));
        }
        values.push(w);
    }
    let rising = values.windows(2).all(|w| w[1] >= w[0]);
    let falling = values.windows(2).all(|w| w[1] <= w[0]);
    if !(rising || falling) {
        return Err(Error::InvalidConfig(
            "frequency is not monotone on the cell".into(),
        ));
    }
    if values[0].signum() != values[PROFILE_GRID - 1].signum() {
        return Err(Error::InvalidConfig(
            "frequency changes sign on the cell".into(),
        ));
    }
    let strictly_monotone = values.windows(2).all(|w| w[1] != w[0]);
    Ok(FrequencyProfile {
        chart,
        strictly_monotone,
    })
}

impl<'a> FrequencyProfile<'a> {
    pub fn chart(&self) -> &'a dyn ActionAngleChart {
        self.chart
    }

    pub fn action_range(&self) -> (f64, f64) {
        self.chart.action_range()
    }

    pub fn is_strictly_monotone(&self) -> bool {
        self.strictly_monotone
    }

    pub fn omega(&self, action: f64) -> Result<f64> {
        self.chart.omega(action)
    }

    pub fn jet(&self, action: f64) -> Result<FrequencyJet> {
        self.chart.frequency_jet(action)
    }

    pub fn b1(&self, action: f64) -> Result<f64> {
        Ok(self.jet(action)?.b1)
    }

    pub fn b2(&self, action: f64) -> Result<f64> {
        Ok(self.jet(action)?.b2)
    }

    pub fn b3(&self, action: f64) -> Result<f64> {
        Ok(self.jet(action)?.b3)
    }
}
