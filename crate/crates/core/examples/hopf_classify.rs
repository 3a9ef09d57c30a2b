//! Classify Hopf data and run the cohomology checklist.

use germlin::hopf::{classify_hopf, hopf_precheck, FlatBundle, HopfSpec};
use germlin::{Coeff, ExactComplex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = vec![ExactComplex::from_ratio(1, 4), ExactComplex::from_ratio(1, 2)];
    let spec = HopfSpec::diagonal(alpha)?;
    let class = classify_hopf(&spec, 12);
    println!("{:?}: {} (relation {:?})", class.kind, class.reason, class.relation);

    let generic = HopfSpec::diagonal(vec![ExactComplex::from_ratio(1, 3), ExactComplex::from_ratio(1, 2)])?;
    println!("{:?}", classify_hopf(&generic, 12).kind);
    let bundle = FlatBundle::new(ExactComplex::from_ratio(5, 7))?;
    let list = hopf_precheck(&bundle, &generic, 2, 12);
    for item in &list.items {
        let tag = if item.pass { "ok  " } else { "FAIL" };
        println!("{tag} {}", item.condition);
    }
    println!("checklist passes: {}", list.pass);
    Ok(())
}
