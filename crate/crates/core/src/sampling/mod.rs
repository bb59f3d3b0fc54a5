//! Multi-shell sampling: the quadrature scheme and the electrostatic baseline.

mod export;
mod geem;
mod grid;
mod scheme;

pub use export::{export_scheme, import_scheme, ExportFormat, SchemeExport, SchemeFile, ShellRecord};
pub use geem::{evenly_spaced_radii, generate_geem, min_pairwise_angle, GeemConfig, GeemScheme, GeemShell};
pub use grid::{condition_number, design_shell_grid, even_system_matrix, Ring, ShellGrid, ThetaPolicy};
pub use scheme::{design_scheme, MultiShellScheme, Shell, DEFAULT_BAND_LIMITS, DEFAULT_B_MAX};

/// Read-only view of a multi-shell point set: one q radius and a list of
/// unit directions per shell, innermost shell first.
pub trait ShellSet {
    fn shell_count(&self) -> usize;
    fn q_radius(&self, shell: usize) -> f64;
    fn directions(&self, shell: usize) -> &[[f64; 3]];

    fn total_samples(&self) -> usize {
        (0..self.shell_count()).map(|s| self.directions(s).len()).sum()
    }
}
