//! Front end of the `pacs` binary: configuration, figure data, verification
//! and CSV output.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    Fig12,
    /// Run the oracle checks for the configured system.
    Verify,
    /// ⟨N⟩, ⟨N²⟩, Q and g² over the grid (one row per point and m).
    Stats,
    /// Number distribution at the configured amplitudes.
    Pnd,
    /// Weight function over the grid.
    Weight,
    /// Normalization and moment density over the grid.
    Sweep,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const VERIFICATION_FAILURE: u8 = 1;
    pub const CONFIG_ERROR: u8 = 2;
    pub const NUMERICAL_FAILURE: u8 = 3;
}
