//! Scenario files: TOML (sectioned key–value) with a JSON equivalent for
//! machine generation. Units live at this boundary (GHz, mm, cm, dB);
//! everything downstream is SI.

use crate::coupling::PassConfiguration;
use crate::error::{PassError, Result};
use crate::sim::SimulationPlan;
use crate::slab::{width_for_v, SlabGeometry};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::path::Path;

/// Raw scenario file; every field optional so short files work.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    waveguide: Option<WaveguideSection>,
    pa: Option<PaSection>,
    simulation: Option<SimulationSection>,
    output: Option<OutputSection>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WaveguideSection {
    f_ghz: Option<f64>,
    n1: Option<f64>,
    n0: Option<f64>,
    width_mm: Option<f64>,
    v_number: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PaSection {
    length_lambda: Option<f64>,
    position_m: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulationSection {
    #[serde(rename = "L_m")]
    l_m: Option<f64>,
    ue_height_m: Option<f64>,
    drops: Option<usize>,
    seed: Option<u64>,
    snr_db: Option<Vec<f64>>,
    grid_cm: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    directory: Option<String>,
    formats: Option<Vec<String>>,
}

/// How the slab cross-section is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SlabSpec {
    /// Width in millimetres.
    WidthMm(f64),
    /// Normalized frequency V; the width follows from the closed-form
    /// inversion.
    VNumber(f64),
}

/// Fully resolved scenario with defaults applied. The defaults mirror the
/// reference deployment: 60 GHz, n1 = √2.1, n0 = 1, V = 1.5, Ls = 2λ,
/// L = 40 m, UE plane 5 m below, 10⁴ drops.
#[derive(Debug, Clone, Serialize)]
pub struct Scenario {
    pub f_ghz: f64,
    pub n1: f64,
    pub n0: f64,
    pub slab: SlabSpec,
    pub pa_length_lambda: f64,
    /// None places the PA at mid-guide.
    pub pa_position_m: Option<f64>,
    pub guide_length_m: f64,
    pub ue_height_m: f64,
    pub drops: usize,
    pub seed: u64,
    pub snr_db: Vec<f64>,
    pub grid_cm: f64,
    pub output_directory: String,
    pub output_formats: Vec<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(PassError::Config(format!(
                "output.formats: unknown format {other:?} (expected \"csv\" or \"json\")"
            ))),
        }
    }
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            f_ghz: 60.0,
            n1: 2.1f64.sqrt(),
            n0: 1.0,
            slab: SlabSpec::VNumber(1.5),
            pa_length_lambda: 2.0,
            pa_position_m: None,
            guide_length_m: 40.0,
            ue_height_m: 5.0,
            drops: 10_000,
            seed: 42,
            snr_db: (30..=80).step_by(5).map(f64::from).collect(),
            grid_cm: 1.0,
            output_directory: "out".into(),
            output_formats: vec![OutputFormat::Csv],
        }
    }
}

impl Scenario {
    /// Loads a scenario from a TOML or JSON file, picking the parser by
    /// extension (`.json` for JSON, anything else is treated as TOML).
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PassError::Io(format!("cannot read {}: {e}", path.display())))?;
        let is_json = path
            .extension()
            .map(|e| e.eq_ignore_ascii_case("json"))
            .unwrap_or(false);
        if is_json {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text)
            .map_err(|e| PassError::Config(format!("scenario parse error: {e}")))?;
        Self::resolve(file)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text)
            .map_err(|e| PassError::Config(format!("scenario parse error: {e}")))?;
        Self::resolve(file)
    }

    fn resolve(file: ScenarioFile) -> Result<Self> {
        let mut scenario = Scenario::default();
        if let Some(w) = file.waveguide {
            if let Some(f) = w.f_ghz {
                require_positive("waveguide.f_ghz", f)?;
                scenario.f_ghz = f;
            }
            if let Some(n1) = w.n1 {
                require_positive("waveguide.n1", n1)?;
                scenario.n1 = n1;
            }
            if let Some(n0) = w.n0 {
                require_positive("waveguide.n0", n0)?;
                scenario.n0 = n0;
            }
            scenario.slab = match (w.width_mm, w.v_number) {
                (Some(_), Some(_)) => {
                    return Err(PassError::Config(
                        "waveguide: width_mm and v_number are mutually exclusive; give exactly one"
                            .into(),
                    ))
                }
                (Some(width), None) => {
                    require_positive("waveguide.width_mm", width)?;
                    SlabSpec::WidthMm(width)
                }
                (None, Some(v)) => {
                    require_positive("waveguide.v_number", v)?;
                    if v >= FRAC_PI_2 {
                        return Err(PassError::Config(format!(
                            "waveguide.v_number = {v} is multimode; the single-mode regime needs V < pi/2 ~ 1.5708"
                        )));
                    }
                    SlabSpec::VNumber(v)
                }
                (None, None) => scenario.slab,
            };
        }
        if let Some(p) = file.pa {
            if let Some(l) = p.length_lambda {
                require_positive("pa.length_lambda", l)?;
                scenario.pa_length_lambda = l;
            }
            if let Some(x) = p.position_m {
                require_positive("pa.position_m", x)?;
                scenario.pa_position_m = Some(x);
            }
        }
        if let Some(s) = file.simulation {
            if let Some(l) = s.l_m {
                require_positive("simulation.L_m", l)?;
                scenario.guide_length_m = l;
            }
            if let Some(h) = s.ue_height_m {
                require_positive("simulation.ue_height_m", h)?;
                scenario.ue_height_m = h;
            }
            if let Some(d) = s.drops {
                if d == 0 {
                    return Err(PassError::Config("simulation.drops must be >= 1".into()));
                }
                scenario.drops = d;
            }
            if let Some(seed) = s.seed {
                scenario.seed = seed;
            }
            if let Some(snr) = s.snr_db {
                if snr.is_empty() {
                    return Err(PassError::Config(
                        "simulation.snr_db must not be empty".into(),
                    ));
                }
                scenario.snr_db = snr;
            }
            if let Some(g) = s.grid_cm {
                require_positive("simulation.grid_cm", g)?;
                scenario.grid_cm = g;
            }
        }
        if let Some(o) = file.output {
            if let Some(dir) = o.directory {
                scenario.output_directory = dir;
            }
            if let Some(fmts) = o.formats {
                if fmts.is_empty() {
                    return Err(PassError::Config(
                        "output.formats must not be empty".into(),
                    ));
                }
                scenario.output_formats = fmts
                    .iter()
                    .map(|s| OutputFormat::parse(s))
                    .collect::<Result<Vec<_>>>()?;
            }
        }
        Ok(scenario)
    }

    pub fn frequency_hz(&self) -> f64 {
        self.f_ghz * 1e9
    }

    /// Slab geometry of the main guide (and of the PAs, which share it).
    pub fn build_slab(&self) -> Result<SlabGeometry> {
        match self.slab {
            SlabSpec::WidthMm(mm) => {
                SlabGeometry::new(mm * 1e-3, self.n1, self.n0, self.frequency_hz())
            }
            SlabSpec::VNumber(v) => {
                let width = width_for_v(self.n1, self.n0, self.frequency_hz(), v)?;
                SlabGeometry::new(width, self.n1, self.n0, self.frequency_hz())
            }
        }
    }

    /// Full PASS configuration with the PA at its configured (or mid-guide)
    /// position.
    pub fn build_configuration(&self) -> Result<PassConfiguration> {
        let slab = self.build_slab()?;
        let ls = self.pa_length_lambda * slab.wavelength();
        let x_p = self.pa_position_m.unwrap_or(self.guide_length_m / 2.0);
        PassConfiguration::new(slab, slab, ls, x_p, self.guide_length_m)
    }

    /// Monte-Carlo plan for the link study.
    pub fn build_plan(&self) -> SimulationPlan {
        SimulationPlan {
            guide_length: self.guide_length_m,
            ue_height: self.ue_height_m,
            num_drops: self.drops,
            snr_grid_db: self.snr_db.clone(),
            placement_resolution: self.grid_cm * 1e-2,
            rng_seed: self.seed,
            fixed_position: self.guide_length_m / 2.0,
        }
    }

    /// The fully resolved configuration as `# key = value` lines, embedded in
    /// every output file so results are reproducible from the file alone.
    pub fn header_lines(&self) -> Vec<String> {
        let slab = match self.slab {
            SlabSpec::WidthMm(mm) => format!("waveguide.width_mm = {mm}"),
            SlabSpec::VNumber(v) => format!("waveguide.v_number = {v}"),
        };
        let formats: Vec<&str> = self
            .output_formats
            .iter()
            .map(|f| match f {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            })
            .collect();
        vec![
            format!("waveguide.f_ghz = {}", self.f_ghz),
            format!("waveguide.n1 = {}", self.n1),
            format!("waveguide.n0 = {}", self.n0),
            slab,
            format!("pa.length_lambda = {}", self.pa_length_lambda),
            format!(
                "pa.position_m = {}",
                self.pa_position_m
                    .unwrap_or(self.guide_length_m / 2.0)
            ),
            format!("simulation.L_m = {}", self.guide_length_m),
            format!("simulation.ue_height_m = {}", self.ue_height_m),
            format!("simulation.drops = {}", self.drops),
            format!("simulation.seed = {}", self.seed),
            format!(
                "simulation.snr_db = [{}]",
                self.snr_db
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            format!("simulation.grid_cm = {}", self.grid_cm),
            format!("output.directory = {}", self.output_directory),
            format!("output.formats = [{}]", formats.join(", ")),
        ]
    }
}

fn require_positive(field: &str, value: f64) -> Result<()> {
    crate::error::ensure_positive(field, value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_reference_deployment() {
        let s = Scenario::default();
        assert_eq!(s.f_ghz, 60.0);
        assert_eq!(s.slab, SlabSpec::VNumber(1.5));
        let cfg = s.build_configuration().unwrap();
        assert!((cfg.main_geometry().normalized_frequency() - 1.5).abs() < 1e-12);
        assert_eq!(cfg.guide_length(), 40.0);
        assert_eq!(cfg.pa_position(), 20.0);
    }

    #[test]
    fn parses_toml_sections() {
        let text = r#"
            [waveguide]
            f_ghz = 60.0
            width_mm = 2.2

            [pa]
            length_lambda = 1.5
            position_m = 10.0

            [simulation]
            L_m = 30.0
            drops = 100
            seed = 7
            snr_db = [40.0, 50.0]
            grid_cm = 2.0

            [output]
            directory = "results"
            formats = ["csv", "json"]
        "#;
        let s = Scenario::from_toml_str(text).unwrap();
        assert_eq!(s.slab, SlabSpec::WidthMm(2.2));
        assert_eq!(s.pa_position_m, Some(10.0));
        assert_eq!(s.guide_length_m, 30.0);
        assert_eq!(s.drops, 100);
        assert_eq!(s.seed, 7);
        assert_eq!(s.snr_db, vec![40.0, 50.0]);
        assert_eq!(
            s.output_formats,
            vec![OutputFormat::Csv, OutputFormat::Json]
        );
    }

    #[test]
    fn json_equivalent_is_accepted() {
        let text = r#"{
            "waveguide": {"v_number": 1.35},
            "simulation": {"drops": 5}
        }"#;
        let s = Scenario::from_json_str(text).unwrap();
        assert_eq!(s.slab, SlabSpec::VNumber(1.35));
        assert_eq!(s.drops, 5);
    }

    #[test]
    fn width_and_v_number_are_mutually_exclusive() {
        let text = r#"
            [waveguide]
            width_mm = 2.2
            v_number = 1.5
        "#;
        let err = Scenario::from_toml_str(text).unwrap_err();
        assert!(matches!(err, PassError::Config(_)));
        assert!(err.to_string().contains("mutually exclusive"));
    }

    #[test]
    fn multimode_v_number_is_rejected() {
        let text = "[waveguide]\nv_number = 1.6\n";
        let err = Scenario::from_toml_str(text).unwrap_err();
        assert!(err.to_string().contains("multimode"));
    }

    #[test]
    fn unknown_keys_are_field_level_errors() {
        let text = "[waveguide]\nfrequency = 60\n";
        let err = Scenario::from_toml_str(text).unwrap_err();
        assert!(matches!(err, PassError::Config(_)));
    }

    #[test]
    fn bad_format_name_is_rejected() {
        let text = "[output]\nformats = [\"xml\"]\n";
        assert!(Scenario::from_toml_str(text).is_err());
    }

    #[test]
    fn header_lines_cover_every_field() {
        let lines = Scenario::default().header_lines();
        let joined = lines.join("\n");
        for key in [
            "waveguide.f_ghz",
            "waveguide.n1",
            "waveguide.n0",
            "waveguide.v_number",
            "pa.length_lambda",
            "pa.position_m",
            "simulation.L_m",
            "simulation.ue_height_m",
            "simulation.drops",
            "simulation.seed",
            "simulation.snr_db",
            "simulation.grid_cm",
            "output.directory",
            "output.formats",
        ] {
            assert!(joined.contains(key), "missing {key}");
        }
    }
}
