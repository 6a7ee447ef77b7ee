//! Locus file exports. CSV columns follow the documented headers exactly;
//! JSON mirrors carry the same records with named fields. Numbers print
//! with 17 significant digits.

use hologeom_core::plane_curve::EvoluteSample;
use hologeom_core::surface::LocusTrace;
use serde_json::json;

pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

/// Evolute polyline: `re_t,im_t,re_x1,im_x1,re_x2,im_x2,flags`.
pub fn export_evolute(sample: &EvoluteSample, format: ExportFormat) -> (String, String) {
    match format {
        ExportFormat::Csv => {
            let mut out = String::from("re_t,im_t,re_x1,im_x1,re_x2,im_x2,flags\n");
            for p in &sample.points {
                let mut flags = Vec::new();
                if p.isotropic {
                    flags.push("isotropic");
                }
                if p.unbounded {
                    flags.push("unbounded");
                }
                let (x1, x2) = match p.e {
                    Some(e) => (e.0[0], e.0[1]),
                    None => (hologeom_core::C::new(f64::NAN, f64::NAN), hologeom_core::C::new(f64::NAN, f64::NAN)),
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    fmt17(p.t.re),
                    fmt17(p.t.im),
                    fmt17(x1.re),
                    fmt17(x1.im),
                    fmt17(x2.re),
                    fmt17(x2.im),
                    flags.join("|")
                ));
            }
            ("evolute.csv".to_string(), out)
        }
        ExportFormat::Json => {
            let records: Vec<_> = sample
                .points
                .iter()
                .map(|p| {
                    json!({
                        "re_t": p.t.re,
                        "im_t": p.t.im,
                        "re_x1": p.e.map(|e| e.0[0].re),
                        "im_x1": p.e.map(|e| e.0[0].im),
                        "re_x2": p.e.map(|e| e.0[1].re),
                        "im_x2": p.e.map(|e| e.0[1].im),
                        "isotropic": p.isotropic,
                        "unbounded": p.unbounded,
                        "envelope_defect": p.envelope_defect,
                    })
                })
                .collect();
            (
                "evolute.json".to_string(),
                serde_json::to_string_pretty(&records).unwrap(),
            )
        }
    }
}

/// Surface locus trace: `u,v,re_z1,im_z1,re_z2,im_z2,residual,flags`.
pub fn export_trace(name: &str, trace: &LocusTrace, format: ExportFormat) -> (String, String) {
    match format {
        ExportFormat::Csv => {
            let mut out = String::from("u,v,re_z1,im_z1,re_z2,im_z2,residual,flags\n");
            for (seg_idx, seg) in trace.segments.iter().enumerate() {
                for p in seg {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{},segment{}\n",
                        fmt17(p.u),
                        fmt17(p.v),
                        fmt17(p.z1.re),
                        fmt17(p.z1.im),
                        fmt17(p.z2.re),
                        fmt17(p.z2.im),
                        fmt17(p.residual),
                        seg_idx
                    ));
                }
            }
            for p in &trace.isolated {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},isolated\n",
                    fmt17(p.u),
                    fmt17(p.v),
                    fmt17(p.z1.re),
                    fmt17(p.z1.im),
                    fmt17(p.z2.re),
                    fmt17(p.z2.im),
                    fmt17(p.residual)
                ));
            }
            (format!("trace_{name}.csv"), out)
        }
        ExportFormat::Json => (
            format!("trace_{name}.json"),
            serde_json::to_string_pretty(trace).unwrap(),
        ),
    }
}
