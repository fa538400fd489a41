#include "qpoi/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qpoi/errors.hpp"
#include "qpoi/problems.hpp"

namespace qpoi {
namespace {

constexpr const char* kTraceHeader = "iter,evals,hv,acq_value,wallclock_ms";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace

SummaryStats summarize(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::domain_error("summarize: empty sample");
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  SummaryStats s;
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = n % 2 == 1 ? sorted[n / 2]
                        : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

void write_runlog_csv(const RunLog& log, const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << kTraceHeader << '\n';
  for (const RunRecord& r : log.records) {
    out << r.iter << ',' << r.evals << ',' << format_double(r.hv) << ','
        << format_double(r.acq_value) << ',' << format_double(r.wallclock_ms)
        << '\n';
  }
  finish_write(out, path);
}

RunLog read_runlog_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("bad trace header in: " + path);
  }
  RunLog log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    RunRecord r;
    try {
      std::getline(row, field, ',');
      r.iter = std::stoi(field);
      std::getline(row, field, ',');
      r.evals = std::stoi(field);
      std::getline(row, field, ',');
      r.hv = std::stod(field);
      std::getline(row, field, ',');
      r.acq_value = std::stod(field);
      if (!std::getline(row, field, ',')) {
        throw std::invalid_argument("missing column");
      }
      r.wallclock_ms = std::stod(field);
    } catch (const std::exception& e) {
      throw std::runtime_error("bad trace row in " + path + ": " + e.what());
    }
    log.records.push_back(std::move(r));
  }
  return log;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.repetitions < 1) {
    throw ConfigError("run_experiment: repetitions must be >= 1");
  }
  if (spec.seeds.size() != static_cast<std::size_t>(spec.repetitions)) {
    throw ConfigError("run_experiment: seeds length must equal repetitions");
  }
  const Problem problem = make_problem(spec.problem, spec.dim);
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + spec.out_dir +
                             ": " + ec.message());
  }

  ExperimentResult result;
  nlohmann::json per_rep = nlohmann::json::array();
  for (int k = 0; k < spec.repetitions; ++k) {
    EngineConfig engine = spec.engine;
    engine.acquisition.variant = spec.variant;
    engine.seed = spec.seeds[k];
    RunLog log = run(problem, engine);

    const std::string rep = std::to_string(k);
    const std::string trace_path = spec.out_dir + "/" + spec.problem + "_" +
                                   to_string(spec.variant) + "_rep" + rep +
                                   ".csv";
    write_runlog_csv(log, trace_path);

    const std::string front_path = spec.out_dir + "/front_rep" + rep + ".csv";
    {
      std::ofstream front = open_for_write(front_path);
      front << "f1,f2\n";
      for (const auto& pt : log.final_archive().points()) {
        front << format_double(pt[0]) << ',' << format_double(pt[1]) << '\n';
      }
      finish_write(front, front_path);
    }

    per_rep.push_back({{"seed", spec.seeds[k]},
                       {"final_hv", log.final_hv()},
                       {"evals", log.records.back().evals},
                       {"iterations", log.records.back().iter},
                       {"trace_csv", trace_path},
                       {"front_csv", front_path}});
    result.final_hvs.push_back(log.final_hv());
    result.trace_paths.push_back(trace_path);
    result.logs.push_back(std::move(log));
  }
  result.final_hv = summarize(result.final_hvs);

  nlohmann::json summary{
      {"problem", spec.problem},
      {"dim", spec.dim},
      {"variant", to_string(spec.variant)},
      {"repetitions", spec.repetitions},
      {"seeds", spec.seeds},
      {"hv_reference", spec.engine.hv_reference},
      {"final_hv",
       {{"min", result.final_hv.min},
        {"max", result.final_hv.max},
        {"median", result.final_hv.median},
        {"mean", result.final_hv.mean},
        {"std", result.final_hv.stddev}}},
      {"per_rep", per_rep}};
  result.summary_path = spec.out_dir + "/summary.json";
  {
    std::ofstream out = open_for_write(result.summary_path);
    out << summary.dump(2) << '\n';
    finish_write(out, result.summary_path);
  }
  return result;
}

}  // namespace qpoi
