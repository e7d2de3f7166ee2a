use serde::Serialize;

use crate::config::Format;

/// A row of an output table; CSV fields use the shortest round-trip float form.
pub trait Row: Serialize {
    const HEADER: &'static str;
    fn fields(&self) -> Vec<String>;
}

pub fn float(v: f64) -> String {
    format!("{v:?}")
}

pub fn render<R: Row>(rows: &[R], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from(R::HEADER);
            out.push('\n');
            for r in rows {
                out.push_str(&r.fields().join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let mut out = serde_json::to_string_pretty(rows).expect("rows serialize");
            out.push('\n');
            out
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SpectrumRow {
    pub k_prime: usize,
    pub location_bits: f64,
    pub weight: f64,
}

impl Row for SpectrumRow {
    const HEADER: &'static str = "k_prime,location_bits,weight";
    fn fields(&self) -> Vec<String> {
        vec![
            self.k_prime.to_string(),
            float(self.location_bits),
            float(self.weight),
        ]
    }
}

#[derive(Debug, Serialize)]
pub struct CurveRow {
    pub q: f64,
    pub single: f64,
    pub across: f64,
    pub tin_single: f64,
    pub tin_across: f64,
}

impl Row for CurveRow {
    const HEADER: &'static str = "q,single,across,tin_single,tin_across";
    fn fields(&self) -> Vec<String> {
        [
            self.q,
            self.single,
            self.across,
            self.tin_single,
            self.tin_across,
        ]
        .into_iter()
        .map(float)
        .collect()
    }
}

#[derive(Debug, Serialize)]
#[allow(non_snake_case)]
pub struct SigmaRow {
    pub sigma: f64,
    pub R_single: f64,
    pub q_single: f64,
    pub R_across: f64,
    pub q_across: f64,
    pub R_tin_single: f64,
    pub R_tin_across: f64,
}

impl Row for SigmaRow {
    const HEADER: &'static str =
        "sigma,R_single,q_single,R_across,q_across,R_tin_single,R_tin_across";
    fn fields(&self) -> Vec<String> {
        [
            self.sigma,
            self.R_single,
            self.q_single,
            self.R_across,
            self.q_across,
            self.R_tin_single,
            self.R_tin_across,
        ]
        .into_iter()
        .map(float)
        .collect()
    }
}

impl Row for sneakpath_core::ValidationCheck {
    const HEADER: &'static str = "check,n,q,trials,mean,std_error,target,z_score,pass";
    fn fields(&self) -> Vec<String> {
        vec![
            self.check.clone(),
            self.n.to_string(),
            float(self.q),
            self.trials.to_string(),
            float(self.mean),
            float(self.std_error),
            float(self.target),
            float(self.z_score),
            self.pass.to_string(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rows = [SpectrumRow {
            k_prime: 0,
            location_bits: 0.1,
            weight: 1e-20,
        }];
        assert_eq!(
            render(&rows, Format::Csv),
            "k_prime,location_bits,weight\n0,0.1,1e-20\n"
        );
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1 + 0.2, std::f64::consts::PI, 1.0 / 3.0, 5e-300] {
            assert_eq!(float(v).parse::<f64>().unwrap(), v);
        }
    }
}
