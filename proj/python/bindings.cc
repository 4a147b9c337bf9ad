#include "nanosim/config.h"
#include "nanosim/kalman.h"
#include "nanosim/metrics.h"
#include "nanosim/runner.h"
#include "nanosim/similarity.h"
#include "nanosim/stability.h"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace nanosim;

namespace
{

std::vector<NodeId>
ToIds (const std::vector<std::uint32_t> &raw)
{
  std::vector<NodeId> ids;
  ids.reserve (raw.size ());
  for (std::uint32_t v : raw)
    {
      ids.push_back (MakeNodeId (v));
    }
  return ids;
}

RoutePath
MakePath (const std::vector<std::uint32_t> &hops, double total)
{
  return RoutePath{ToIds (hops), total};
}

ScenarioConfig
BuildConfig (const std::string &text, const std::vector<std::string> &overrides)
{
  ScenarioConfig config = ParseConfig (text);
  for (const std::string &o : overrides)
    {
      ApplyOverride (config, o);
    }
  config.Validate ();
  return config;
}

py::dict
MetricsDict (const std::map<int, SeedMetrics> &metrics)
{
  py::dict out;
  for (const auto &[bucket, m] : metrics)
    {
      py::dict row;
      row["energy_per_bit"] = m.energyPerBit;
      row["delivery_ratio"] = m.deliveryRatio;
      row["avg_throughput"] = m.throughput;
      out[py::int_ (bucket)] = row;
    }
  return out;
}

} // namespace

PYBIND11_MODULE (_nanosim, m)
{
  m.doc () = "Nanosensor network routing simulator";
  m.attr ("__version__") = kVersion;

  py::register_exception<InvalidInput> (m, "InvalidInput", PyExc_ValueError);
  py::register_exception<FileError> (m, "FileError", PyExc_OSError);

  py::class_<KalmanState> (m, "KalmanState")
      .def_readonly ("estimate", &KalmanState::estimate)
      .def_readonly ("covariance", &KalmanState::covariance)
      .def_readonly ("theta", &KalmanState::theta);

  m.def (
      "kf_init",
      [] (const std::vector<double> &batch, double k, double h, double q, double z,
          double initialCovariance) {
        return KfInit (batch, KalmanParams{k, h, q, z, initialCovariance});
      },
      py::arg ("batch"), py::arg ("k") = 1.0, py::arg ("h") = 1.0, py::arg ("q") = 0.01,
      py::arg ("z") = 1.0, py::arg ("initial_covariance") = 1.0);
  m.def ("kf_predict", &KfPredict, py::arg ("state"));
  m.def ("kf_update", &KfUpdate, py::arg ("prior"), py::arg ("measurement"));
  m.def ("link_quality", &LinkQuality, py::arg ("state"));

  m.def (
      "stability_scores",
      [] (const std::vector<std::tuple<double, double, double>> &rows) {
        FactorMatrix matrix;
        std::uint32_t id = 1;
        for (const auto &[energy, quality, distance] : rows)
          {
            matrix.rows.push_back ({energy, quality, distance});
            matrix.candidateIds.push_back (MakeNodeId (id++));
          }
        matrix.Validate ();
        const auto normalized = Normalize (matrix);
        if (!normalized)
          {
            return std::vector<double>{1.0};
          }
        return StabilityScores (*normalized, EntropyWeights (*normalized));
      },
      py::arg ("rows"), "Scores for (residual energy, link quality, distance to NC) rows.");
  m.def ("next_hop_count", &NextHopCount, py::arg ("n"), py::arg ("tau"));

  m.def (
      "similarity",
      [] (const std::vector<std::uint32_t> &main, const std::vector<std::uint32_t> &candidate,
          double kSim, double sigma, bool setIntersection) {
        SimilarityParams params{kSim, sigma,
                                setIntersection ? NodeCountConvention::kSetIntersection
                                                : NodeCountConvention::kExcludeSource};
        params.Validate ();
        return Similarity (MakePath (main, 0.0), MakePath (candidate, 0.0), params);
      },
      py::arg ("main"), py::arg ("candidate"), py::arg ("k_sim") = 0.5, py::arg ("sigma") = 0.5,
      py::arg ("set_intersection") = false);

  m.def (
      "dump_config",
      [] (const std::string &text, const std::vector<std::string> &overrides) {
        return DumpConfig (BuildConfig (text, overrides));
      },
      py::arg ("text") = "", py::arg ("overrides") = std::vector<std::string>{});

  m.def (
      "run_seed",
      [] (const std::string &text, const std::vector<std::string> &overrides) {
        const ScenarioConfig config = BuildConfig (text, overrides);
        std::map<int, SeedMetrics> metrics;
        {
          py::gil_scoped_release release;
          metrics = RunSeed (config, nullptr, LogDetail::kNone);
        }
        return MetricsDict (metrics);
      },
      py::arg ("text") = "", py::arg ("overrides") = std::vector<std::string>{},
      "Runs config.protocol with config.rng_seed and returns metrics per bucket.");

  m.def (
      "run_batch",
      [] (const std::string &text, const std::vector<std::string> &overrides,
          const std::string &protocols, const std::string &seeds, const std::filesystem::path &out,
          const std::string &logDetail) {
        BatchOptions options;
        options.config = BuildConfig (text, overrides);
        options.protocols = ParseProtocols (protocols);
        options.seeds = ParseSeeds (seeds);
        options.outDir = out;
        options.fileDetail = ParseLogDetail (logDetail);
        BatchResult result;
        {
          py::gil_scoped_release release;
          result = RunBatch (options);
        }
        return result.csv;
      },
      py::arg ("text"), py::arg ("overrides"), py::arg ("protocols"), py::arg ("seeds"),
      py::arg ("out"), py::arg ("log_detail") = "none",
      "Writes logs, metrics.csv and manifest.json under `out`; returns the CSV path.");

  m.def ("csv_columns", &CsvColumns);
}
