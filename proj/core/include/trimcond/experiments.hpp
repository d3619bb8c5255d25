#pragma once

#include <map>
#include <optional>

#include "trimcond/catalog.hpp"
#include "trimcond/krylov.hpp"

namespace trimcond {

enum class Preconditioner {
  None,
  Jacobi,
  Sipic,
  SchwarzCut,
  SchwarzContainment,
  SchwarzIntersection,
  Deflation,
  DeflationReduced,
};

std::string precond_name(Preconditioner p);

struct MatrixSelection {
  MatrixKind kind = MatrixKind::Mass;
  bool combined = false;  // a1*M + a2*K
  Real a1 = 1, a2 = 0;
};

enum class DirichletSelection { None, LeftRight, Base, LeftOnly };

struct ExperimentConfig {
  std::string experiment = "sweep";  // sweep|spectrum|solve|project|wave
  std::string geometry = "trimmed_line";
  CatalogParams params;
  BasisSpec basis;
  MatrixSelection matrix;
  DirichletSelection dirichlet = DirichletSelection::None;
  std::vector<Preconditioner> preconditioners = {Preconditioner::Jacobi};
  std::vector<Real> sweep_delta;  // descending = paper's delta -> 0
  std::vector<Real> sweep_angle;  // square_with_hole projection sweep
  Real zeta = 0.9L;
  int sipic_max_sweeps = 10;
  Real schwarz_drop_tol = 1e-14L;
  Real tau = 0.25L;
  SolverConfig solver;
  int quad_depth = 12;
  Real area_tol = 1e-12L;
  Index dense_cap = 4000;
  unsigned seed = 1;
  std::string out_dir;  // empty: no files written
  // wave parameters
  int wave_steps = 600;
  Real wave_T = 0.4L;
  std::vector<Real> snapshot_times;

  std::string canonical_json() const;
  std::uint64_t config_hash() const;
};

ExperimentConfig parse_config(const std::string& json_text);

/// Geometrically spaced values from `hi` down to `lo` (paper order).
std::vector<Real> log_spaced_desc(Real hi, Real lo, int count);

// Assembled system plus everything needed to precondition it.
struct AssembledProblem {
  CatalogGeometry geo;
  TensorBasis basis;
  DofMap dofs;
  CutClassification cls;
  CutQuadrature quad;
  SymmetricSparseMatrix A;       // after optional Dirichlet reduction
  Vec b;                         // load (0 if not requested)
  std::vector<Index> kept;       // active indices kept by the reduction
  JacobiScaling jacobi;          // of A
  SymmetricSparseMatrix Ahat;    // Jacobi-scaled A
  Vec bhat;
  // dof maps for deflation sets on the reduced numbering
  std::vector<Index> weak_set;         // active-dof indices (reduced system)
  std::vector<Index> weak_set_reduced; // after rank_reduce(tau)
};

AssembledProblem assemble_problem(const ExperimentConfig& cfg,
                                  const ScalarField* load = nullptr);

struct SweepRow {
  Real delta = 0, eta = 0;
  std::map<std::string, Real> kappa;  // by preconditioner column name
  Index rank_full = 0, rank_reduced = 0;
  std::map<std::string, Index> iters;
  std::string note;
  bool failed = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::map<std::string, SlopeFit> slopes;  // vs eta and vs 1/delta variants
  std::string csv;
};

SweepResult run_sweep(const ExperimentConfig& cfg);

struct SolveRunResult {
  std::map<std::string, SolveReport> reports;  // by preconditioner
  Real kappa_jacobi = 0;
  Real kappa_eff_deflation = 0;
  Vec oracle;  // dense reference solution of the scaled system
  std::string csv;
};

SolveRunResult run_solve(const ExperimentConfig& cfg);

struct ProjectionResult {
  std::vector<Real> angles;
  std::vector<Real> kappa_eff;             // deflated
  std::map<std::string, std::vector<Index>> iters;
  std::string csv;
};

ProjectionResult run_projection(const ExperimentConfig& cfg);

struct WaveResult {
  std::vector<Index> per_step_iters;
  std::vector<std::pair<Real, Vec>> snapshots;  // (time, coefficients)
  Vec final_u;
  Vec mass_diag;  // for norms in tests
  bool jacobi_first_step_failed = false;
  Index jacobi_first_step_iters = 0;
  std::string csv;
};

WaveResult run_wave(const ExperimentConfig& cfg);

/// Writes csv text and a manifest into cfg.out_dir when set.
void write_outputs(const ExperimentConfig& cfg, const std::string& kind,
                   const std::string& csv);

}  // namespace trimcond
