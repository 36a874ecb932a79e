DESCRIPTION = "Multi-agent DRL hybrid beamforming workbench"

EPILOG = """\
Environment:
  MAHBF_PRESET      default preset (desk | paper)
  MAHBF_OUTPUT_DIR  default output directory
  MAHBF_WORKERS     default worker processes for sweep/converge
  MAHBF_LOG_LEVEL   console log level (DEBUG, INFO, WARNING, ...)
  MAHBF_CONFIG_DIR  directory searched for experiment.yaml

Experiment file keys (YAML):
  channel, system, trainer, snr_grid, agent_counts, seeds, realizations,
  output_dir, emit, workers, timing_snr_db, baseline_draws, cases

Precedence: command-line flags > experiment file > preset > defaults.
Lists are comma separated; write negative values as --snr=-5,0,5.

Exit status is 0 only when every point (or every oracle suite) succeeded.\
"""

ORDERING = ("case3", "case2", "case1", "single")
