//! Computes the headline capabilities of the built-in robot description.

use tipstat::robot::RobotSpec;
use tipstat::statics::{capability, tri_max_pull_push};
use tipstat::{Error, LoadKind, LoadLocation};

fn main() -> Result<(), Error> {
    let robot: RobotSpec<f64> = RobotSpec::stretch_re1();
    let payload = capability(&robot, LoadKind::Payload, LoadLocation::FullReach)?;
    let pull = tri_max_pull_push(&robot, 0.7)?;
    println!("payload {payload} kg, pull {pull} N at 0.7 m");
    Ok(())
}
