use serde::{Deserialize, Serialize};

/// Sweep result: one row per abscissa value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub abscissa_name: String,
    pub measured_name: String,
    pub reference_name: String,
    pub abscissae: Vec<f64>,
    pub measured: Vec<f64>,
    pub reference: Vec<f64>,
    /// Additional named columns of the same length.
    pub extra: Vec<(String, Vec<f64>)>,
    /// Least-squares log-log slope of measured against abscissae.
    pub slope: Option<f64>,
    pub flags: Vec<String>,
}

impl DecayReport {
    pub fn new(abscissa_name: &str, measured_name: &str, reference_name: &str) -> Self {
        DecayReport {
            abscissa_name: abscissa_name.into(),
            measured_name: measured_name.into(),
            reference_name: reference_name.into(),
            abscissae: Vec::new(),
            measured: Vec::new(),
            reference: Vec::new(),
            extra: Vec::new(),
            slope: None,
            flags: Vec::new(),
        }
    }

    pub fn push_extra(&mut self, name: &str, values: Vec<f64>) {
        self.extra.push((name.into(), values));
    }

    pub fn extra_column(&self, name: &str) -> Option<&[f64]> {
        self.extra
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn fit_slope(&mut self) {
        self.slope = loglog_slope(&self.abscissae, &self.measured);
    }

    /// Checks strict monotonicity of the abscissae and equal column lengths.
    pub fn is_consistent(&self) -> bool {
        let n = self.abscissae.len();
        let monotone = self.abscissae.windows(2).all(|w| w[1] > w[0])
            || self.abscissae.windows(2).all(|w| w[1] < w[0]);
        monotone
            && self.measured.len() == n
            && self.reference.len() == n
            && self.extra.iter().all(|(_, v)| v.len() == n)
    }

    /// Column names in CSV order.
    pub fn header(&self) -> Vec<String> {
        let mut h = vec![
            self.abscissa_name.clone(),
            self.measured_name.clone(),
            self.reference_name.clone(),
        ];
        h.extend(self.extra.iter().map(|(n, _)| n.clone()));
        h
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.abscissae.len())
            .map(|i| {
                let mut r = vec![self.abscissae[i], self.measured[i], self.reference[i]];
                r.extend(self.extra.iter().map(|(_, v)| v[i]));
                r
            })
            .collect()
    }
}

/// Least-squares slope of log y against log x over the rows with y > 0.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
