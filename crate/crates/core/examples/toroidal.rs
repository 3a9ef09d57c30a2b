//! Shear a toroidal group to standard form and measure its convex-hull margin.

use germlin::toroidal::{
    convex_extension_eta, shear_to_standard, validate_irrationality, DomainSpec, ToroidalSpecDoc,
};

const SPEC: &str = r#"{
  "n": 2, "a": 0, "b": 0, "q": 1,
  "R1": [["1.4142135623730951"]],
  "R2": [["1.7320508075688772"]],
  "R3": [[{"re": "0", "im": "1"}]],
  "P0": [[{"re": "0", "im": "1"}]],
  "P1": [["0"]]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc: ToroidalSpecDoc = serde_json::from_str(SPEC)?;
    let spec = doc.parse()?;
    let basis = shear_to_standard(&spec)?;
    println!("tau = {:?}", basis.tau());
    println!("irrationality: {:?}", validate_irrationality(&spec, 20));

    let dom = DomainSpec::new(0.1, 2.0, vec![(1.0, 0.5), (2.0, 0.25)])?;
    println!("eta = {}", convex_extension_eta(&spec, &dom)?);
    Ok(())
}
