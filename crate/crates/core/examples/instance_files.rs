// Reading, analyzing and generating JSON instance files.

use nframe::instance::{analyze, generate_instance, parse_instance, GenerateOptions, InstanceKind};
use nframe::Result;

pub fn run_example() -> Result<()> {
    let text = include_str!("diag21.json");
    let analysis = analyze(&parse_instance(text)?.validate()?)?;
    print!("{}", analysis.summary());

    let spec = generate_instance(GenerateOptions {
        kind: InstanceKind::TightKFrame,
        seed: 5,
        dim: 5,
        arity: 3,
        size: None,
    })?;
    let json = serde_json::to_string_pretty(&spec)?;
    let back = analyze(&parse_instance(&json)?.validate()?)?;
    println!("generated tight K-frame round-trips: {}", back.passed());

    match parse_instance(r#"{"schema_version": 1, "dim": 3, "arity": 2, "anchors": [[0, 0, 1]], "frame": [[1, 0]], "colour": 1}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("instance file example");
}
