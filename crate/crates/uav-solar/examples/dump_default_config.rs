//! Prints the built-in AtlantikSolar configuration as TOML.
//!
//! Useful as a starting point for a custom aircraft file:
//!
//! ```sh
//! cargo run --example dump_default_config > my_aircraft.toml
//! ```

fn main() {
    print!("{}", uav_solar::ArtifactConfig::atlantik_solar().to_toml_string());
}
