//! Writes a small set of input files for the `knockout` command-line tool
//! into a directory (default `./knockout-demo`).
//!
//! ```text
//! cargo run --example json_files -- /tmp/demo
//! cargo run -- components --spec /tmp/demo/r3.json --set /tmp/demo/set.json --dot /tmp/demo/g.dot
//! cargo run -- check-robust --kernel /tmp/demo/xor.json --spec /tmp/demo/r1.json
//! ```

use std::path::PathBuf;

use knockout::io;
use knockout::kernels::{from_function, DeterministicMap};
use knockout::robustness::RobustnessSpec;
use knockout::scalar::Rational;
use knockout::space::StateSpace;
use serde_json::json;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "knockout-demo".into()));
    std::fs::create_dir_all(&dir)?;
    let save = |name: &str, value: serde_json::Value| std::fs::write(dir.join(name), io::to_text(&value));

    let cube = StateSpace::binary(4);
    save("r3.json", io::spec_to_json(&RobustnessSpec::r_k(&cube, 3)?))?;
    save("set.json", json!({"coords": [[0,0,0,0],[0,0,1,0],[0,1,0,1],[0,1,1,1],[1,0,0,0],[1,0,1,0],[1,1,0,1],[1,1,1,1]]}))?;

    let pair = StateSpace::binary(2);
    save("r1.json", io::spec_to_json(&RobustnessSpec::r_k(&pair, 1)?))?;
    let xor = DeterministicMap::from_fn(&pair, |c| c[0] ^ c[1])?;
    save("xor.json", io::kernel_to_json(&from_function::<Rational>(&xor)))?;
    save("canalyzing.json", io::spec_to_json(&RobustnessSpec::canalyzing(&pair, 1, 0)?))?;

    let spec = io::spec_from_json(&io::read_json(&dir.join("r1.json"))?)?;
    assert_eq!(spec, RobustnessSpec::r_k(&pair, 1)?);
    println!("wrote files to {}", dir.display());
    Ok(())
}
