#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpoi/acquisition.hpp"
#include "qpoi/engine.hpp"

namespace qpoi {

// A batch of repeated engine runs over one problem/variant pair. The
// engine's variant and seed fields are overwritten per repetition; every
// other engine setting applies unchanged to all repetitions.
struct ExperimentSpec {
  std::string problem = "zdt1";
  int dim = 5;
  Variant variant = Variant::kBest;
  int repetitions = 1;
  std::vector<std::uint64_t> seeds;  // one per repetition
  EngineConfig engine{};
  std::string out_dir = ".";
};

struct SummaryStats {
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1); 0 for n = 1
};

// Order statistics and moments of a non-empty sample; throws
// std::domain_error on an empty one.
SummaryStats summarize(const std::vector<double>& values);

// Writes / reads the scalar trace with header iter,evals,hv,acq_value,
// wallclock_ms. Doubles are printed with %.17g so a round-trip is lossless;
// archive snapshots are not part of the CSV. IO failures raise
// std::runtime_error naming the path.
void write_runlog_csv(const RunLog& log, const std::string& path);
RunLog read_runlog_csv(const std::string& path);

struct ExperimentResult {
  std::vector<RunLog> logs;
  std::vector<double> final_hvs;
  SummaryStats final_hv;
  std::vector<std::string> trace_paths;
  std::string summary_path;
};

// Runs every repetition sequentially and writes, under spec.out_dir:
// {problem}_{variant}_rep{k}.csv (trace), front_rep{k}.csv (final archive,
// header f1,f2) and summary.json (settings plus final-HV statistics).
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace qpoi
