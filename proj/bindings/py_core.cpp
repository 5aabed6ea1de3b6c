// Python bindings for the benchmark core. Thin and faithful: same names,
// same defaults, same exceptions (ConfigError -> ValueError subclass,
// IoError -> OSError subclass).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pqbench/errors.hpp"
#include "pqbench/metrics.hpp"
#include "pqbench/runner.hpp"
#include "pqbench/scenario_io.hpp"

namespace py = pybind11;
using namespace pqbench;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Deterministic handshake/download timing benchmark for classical and "
      "hybrid post-quantum cipher suite shapes over an emulated impaired link";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  // rng
  py::class_<DeterministicRng>(m, "DeterministicRng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_u64", &DeterministicRng::next_u64)
      .def("next_unit", &DeterministicRng::next_unit)
      .def("fork", &DeterministicRng::fork, py::arg("tag"))
      .def_property_readonly("seed", &DeterministicRng::seed);
  m.def("combine_seed", &combine_seed, py::arg("a"), py::arg("b"));
  m.def("fnv1a64", [](const std::string& s) { return fnv1a64(s); }, py::arg("text"));

  // suites
  py::class_<KemParams>(m, "KemParams")
      .def(py::init<>())
      .def_readwrite("name", &KemParams::name)
      .def_readwrite("client_share_bytes", &KemParams::client_share_bytes)
      .def_readwrite("server_share_bytes", &KemParams::server_share_bytes)
      .def_readwrite("shared_secret_bytes", &KemParams::shared_secret_bytes);
  py::class_<SigParams>(m, "SigParams")
      .def(py::init<>())
      .def_readwrite("name", &SigParams::name)
      .def_readwrite("public_key_bytes", &SigParams::public_key_bytes)
      .def_readwrite("signature_bytes", &SigParams::signature_bytes);
  py::class_<CostModel>(m, "CostModel")
      .def(py::init<>())
      .def_readwrite("keygen_s", &CostModel::keygen_s)
      .def_readwrite("encap_s", &CostModel::encap_s)
      .def_readwrite("decap_s", &CostModel::decap_s)
      .def_readwrite("sign_s", &CostModel::sign_s)
      .def_readwrite("verify_s", &CostModel::verify_s);
  py::class_<CryptoSuite>(m, "CryptoSuite")
      .def(py::init<>())
      .def_readwrite("name", &CryptoSuite::name)
      .def_readwrite("kem", &CryptoSuite::kem)
      .def_readwrite("sig", &CryptoSuite::sig)
      .def_readwrite("cost", &CryptoSuite::cost)
      .def_readwrite("cert_overhead_bytes", &CryptoSuite::cert_overhead_bytes);
  py::class_<WireOverheads>(m, "WireOverheads")
      .def(py::init<>())
      .def_readwrite("hello_overhead_bytes", &WireOverheads::hello_overhead_bytes)
      .def_readwrite("finished_bytes", &WireOverheads::finished_bytes);
  py::class_<FlightSizes>(m, "FlightSizes")
      .def_readonly("client_hello", &FlightSizes::client_hello)
      .def_readonly("server_hello", &FlightSizes::server_hello)
      .def_readonly("certificate", &FlightSizes::certificate)
      .def_readonly("certificate_verify", &FlightSizes::certificate_verify)
      .def_readonly("server_finished", &FlightSizes::server_finished)
      .def_readonly("server_flight", &FlightSizes::server_flight)
      .def_readonly("client_finished", &FlightSizes::client_finished)
      .def("total", &FlightSizes::total);
  m.def("builtin_catalog", &builtin_catalog);
  m.def(
      "find_suite",
      [](const std::vector<CryptoSuite>& catalog, const std::string& name) {
        return find_suite(catalog, name);  // by value: python owns the copy
      },
      py::arg("catalog"), py::arg("name"));
  m.def("flight_sizes", &flight_sizes, py::arg("suite"), py::arg("overheads") = WireOverheads{});
  m.def(
      "mock_crypto_op",
      [](const std::string& kind, const CryptoSuite& suite, std::uint64_t seed, py::bytes input) {
        const std::string buf = input;
        const auto* data = reinterpret_cast<const std::uint8_t*>(buf.data());
        const auto result = mock_provider().op(crypto_op_from_name(kind), suite, seed,
                                               {data, buf.size()});
        return py::make_tuple(
            py::bytes(reinterpret_cast<const char*>(result.blob.data()), result.blob.size()),
            result.cost_s, result.accepted);
      },
      py::arg("kind"), py::arg("suite"), py::arg("seed"), py::arg("input") = py::bytes(),
      "Returns (blob, cost_s, accepted); kind is one of keygen/encap/decap/sign/verify");

  // netlink
  m.attr("SEGMENT_HEADER_BYTES") = kSegmentHeaderBytes;
  m.attr("UNLIMITED_BANDWIDTH") = kUnlimitedBandwidth;
  py::class_<NetworkProfile>(m, "NetworkProfile")
      .def(py::init<>())
      .def_readwrite("one_way_latency_s", &NetworkProfile::one_way_latency_s)
      .def_readwrite("loss_rate", &NetworkProfile::loss_rate)
      .def_readwrite("bandwidth_Bps", &NetworkProfile::bandwidth_Bps)
      .def_readwrite("mtu_bytes", &NetworkProfile::mtu_bytes)
      .def("payload_per_segment_bytes", &NetworkProfile::payload_per_segment_bytes);
  py::class_<DeliveryOutcome>(m, "DeliveryOutcome")
      .def_readonly("delivered", &DeliveryOutcome::delivered)
      .def_readonly("arrival_time_s", &DeliveryOutcome::arrival_time_s);
  m.def("serialization_s", &serialization_s, py::arg("size_bytes"), py::arg("profile"));
  m.def("transmit", &transmit, py::arg("size_bytes"), py::arg("send_time_s"), py::arg("profile"),
        py::arg("rng"));
  m.def("segment_count", &segment_count, py::arg("payload_bytes"), py::arg("profile"));

  // transport
  py::class_<TransportParams>(m, "TransportParams")
      .def(py::init<>())
      .def_readwrite("initial_cwnd_segments", &TransportParams::initial_cwnd_segments)
      .def_readwrite("cwnd_cap_segments", &TransportParams::cwnd_cap_segments)
      .def_readwrite("rto_initial_s", &TransportParams::rto_initial_s)
      .def_readwrite("rto_min_s", &TransportParams::rto_min_s)
      .def_readwrite("rto_max_s", &TransportParams::rto_max_s)
      .def_readwrite("rto_backoff_factor", &TransportParams::rto_backoff_factor)
      .def_readwrite("max_retries", &TransportParams::max_retries)
      .def_readwrite("ack_bytes", &TransportParams::ack_bytes)
      .def_readwrite("delayed_ack", &TransportParams::delayed_ack)
      .def_readwrite("delayed_ack_timeout_s", &TransportParams::delayed_ack_timeout_s)
      .def_readwrite("lossy_acks", &TransportParams::lossy_acks);
  py::class_<TransferTrace>(m, "TransferTrace")
      .def_readonly("completion_time_s", &TransferTrace::completion_time_s)
      .def_readonly("receiver_done_time_s", &TransferTrace::receiver_done_time_s)
      .def_readonly("segments_sent", &TransferTrace::segments_sent)
      .def_readonly("retransmissions", &TransferTrace::retransmissions)
      .def_readonly("bytes_delivered", &TransferTrace::bytes_delivered);
  m.def("rto_for_attempt", &rto_for_attempt, py::arg("params"), py::arg("srtt_s"),
        py::arg("attempt"));
  m.def("deliver_stream", &deliver_stream, py::arg("payload_bytes"), py::arg("start_time_s"),
        py::arg("profile"), py::arg("params"), py::arg("rng"));

  // session
  py::class_<SessionOptions>(m, "SessionOptions")
      .def(py::init<>())
      .def_readwrite("piggyback_handshake_acks", &SessionOptions::piggyback_handshake_acks)
      .def_readwrite("request_bytes", &SessionOptions::request_bytes)
      .def_readwrite("record_overhead_fraction", &SessionOptions::record_overhead_fraction)
      .def_readwrite("charge_connect_rtt", &SessionOptions::charge_connect_rtt)
      .def_readwrite("overheads", &SessionOptions::overheads);
  py::class_<HandshakeTrace>(m, "HandshakeTrace")
      .def_readonly("handshake_time_s", &HandshakeTrace::handshake_time_s)
      .def_readonly("crypto_time_s", &HandshakeTrace::crypto_time_s)
      .def_property_readonly("flights", [](const HandshakeTrace& trace) {
        return std::vector<TransferTrace>(trace.flights.begin(), trace.flights.end());
      });
  py::class_<TimingSample>(m, "TimingSample")
      .def_readonly("suite_name", &TimingSample::suite_name)
      .def_readonly("handshake_time_s", &TimingSample::handshake_time_s)
      .def_readonly("total_download_time_s", &TimingSample::total_download_time_s)
      .def_readonly("file_bytes", &TimingSample::file_bytes)
      .def_readonly("transfer_rate_Bps", &TimingSample::transfer_rate_Bps)
      .def_readonly("seed", &TimingSample::seed)
      .def_readonly("valid", &TimingSample::valid);
  m.def(
      "run_handshake",
      [](const CryptoSuite& suite, const NetworkProfile& profile, const TransportParams& params,
         DeterministicRng& rng, const SessionOptions& options, double start_time_s) {
        return run_handshake(suite, profile, params, rng, options, start_time_s);
      },
      py::arg("suite"), py::arg("profile"), py::arg("params"), py::arg("rng"),
      py::arg("options") = SessionOptions{}, py::arg("start_time_s") = 0.0);
  m.def(
      "run_session",
      [](const CryptoSuite& suite, const NetworkProfile& profile, std::uint64_t file_bytes,
         const TransportParams& params, std::uint64_t seed, const SessionOptions& options) {
        return run_session(suite, profile, file_bytes, params, seed, options);
      },
      py::arg("suite"), py::arg("profile"), py::arg("file_bytes"), py::arg("params"),
      py::arg("seed"), py::arg("options") = SessionOptions{});

  // runner
  m.attr("WORKERS_ENV_VAR") = kWorkersEnvVar;
  m.attr("DEFAULT_FILE_BYTES") = kDefaultFileBytes;
  m.attr("DESK_FILE_SWEEP_CAP_BYTES") = kDeskFileSweepCapBytes;
  m.attr("FULL_FILE_SWEEP_CAP_BYTES") = kFullFileSweepCapBytes;
  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def(py::init<>())
      .def_readwrite("name", &ScenarioSpec::name)
      .def_readwrite("suites", &ScenarioSpec::suites)
      .def_readwrite("profile", &ScenarioSpec::profile)
      .def_readwrite("file_bytes", &ScenarioSpec::file_bytes)
      .def_readwrite("runs", &ScenarioSpec::runs)
      .def_readwrite("base_seed", &ScenarioSpec::base_seed)
      .def_readwrite("transport", &ScenarioSpec::transport)
      .def_readwrite("session", &ScenarioSpec::session);
  py::class_<RunResults>(m, "RunResults")
      .def_readonly("spec", &RunResults::spec)
      .def_readonly("samples", &RunResults::samples);
  m.def("preset", &preset, py::arg("name"));
  m.def("preset_names", [] { return preset_names(); });
  m.def("sweep_file_size", &sweep_file_size, py::arg("max_bytes") = kDeskFileSweepCapBytes,
        py::arg("runs") = 10, py::arg("base_seed") = 1);
  m.def("sweep_latency", &sweep_latency, py::arg("runs") = 10, py::arg("base_seed") = 1);
  m.def("sweep_loss", &sweep_loss, py::arg("runs") = 10, py::arg("base_seed") = 1);
  m.def("run_seed", &run_seed, py::arg("base_seed"), py::arg("run_index"));
  m.def(
      "execute",
      [](const ScenarioSpec& spec, std::optional<std::vector<CryptoSuite>> catalog, int workers) {
        ExecuteOptions options;
        options.workers = workers;
        return execute(spec, catalog ? *catalog : builtin_catalog(), options);
      },
      py::arg("spec"), py::arg("catalog") = py::none(), py::arg("workers") = 0,
      py::call_guard<py::gil_scoped_release>());

  // scenario files
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def(
      "apply_suite_overrides",
      [](std::vector<CryptoSuite> catalog, const std::filesystem::path& path) {
        apply_suite_overrides(catalog, path);
        return catalog;
      },
      py::arg("catalog"), py::arg("path"),
      "Returns a new catalog with the override file applied");

  // metrics
  m.attr("CSV_HEADER") = std::string(kCsvHeader);
  py::class_<StatsSummary>(m, "StatsSummary")
      .def_readonly("n", &StatsSummary::n)
      .def_readonly("mean", &StatsSummary::mean)
      .def_readonly("median", &StatsSummary::median)
      .def_readonly("q1", &StatsSummary::q1)
      .def_readonly("q3", &StatsSummary::q3)
      .def_readonly("iqr", &StatsSummary::iqr)
      .def_readonly("whisker_low", &StatsSummary::whisker_low)
      .def_readonly("whisker_high", &StatsSummary::whisker_high)
      .def_readonly("outliers", &StatsSummary::outliers);
  m.def(
      "summarize",
      [](const std::vector<double>& values) { return summarize(values); },
      py::arg("values"));
  m.def("percent_delta", &percent_delta, py::arg("baseline_mean"), py::arg("candidate_mean"));
  m.def("transfer_rate", &transfer_rate, py::arg("sample"));
  py::class_<ComparisonRow>(m, "ComparisonRow")
      .def_readonly("metric", &ComparisonRow::metric)
      .def_readonly("suite", &ComparisonRow::suite)
      .def_readonly("baseline_mean", &ComparisonRow::baseline_mean)
      .def_readonly("candidate_mean", &ComparisonRow::candidate_mean)
      .def_readonly("delta_pct", &ComparisonRow::delta_pct)
      .def_readonly("within_10pct", &ComparisonRow::within_10pct)
      .def_readonly("within_20pct", &ComparisonRow::within_20pct);
  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("baseline_suite", &ComparisonReport::baseline_suite)
      .def_readonly("threshold_low_pct", &ComparisonReport::threshold_low_pct)
      .def_readonly("threshold_high_pct", &ComparisonReport::threshold_high_pct)
      .def_readonly("rows", &ComparisonReport::rows)
      .def_readonly("excluded_n", &ComparisonReport::excluded_n);
  m.def("compare", &compare, py::arg("results"), py::arg("baseline_suite"),
        py::arg("threshold_low_pct") = 10.0, py::arg("threshold_high_pct") = 20.0);
  m.def("format_comparison", &format_comparison, py::arg("report"));
  m.def("write_csv", &write_csv, py::arg("results"), py::arg("path"));
  py::class_<CsvRow>(m, "CsvRow")
      .def_readonly("scenario", &CsvRow::scenario)
      .def_readonly("suite", &CsvRow::suite)
      .def_readonly("run", &CsvRow::run)
      .def_readonly("seed", &CsvRow::seed)
      .def_readonly("handshake_time_s", &CsvRow::handshake_time_s)
      .def_readonly("total_download_time_s", &CsvRow::total_download_time_s)
      .def_readonly("file_bytes", &CsvRow::file_bytes)
      .def_readonly("transfer_rate_Bps", &CsvRow::transfer_rate_Bps)
      .def_readonly("valid", &CsvRow::valid)
      .def_readonly("swept_value", &CsvRow::swept_value);
  py::class_<CsvData>(m, "CsvData")
      .def_readonly("has_swept_column", &CsvData::has_swept_column)
      .def_readonly("rows", &CsvData::rows);
  m.def("read_csv", &read_csv, py::arg("path"));
  m.def("compare_csv", &compare_csv, py::arg("data"), py::arg("baseline_suite"),
        py::arg("threshold_low_pct") = 10.0, py::arg("threshold_high_pct") = 20.0);
  m.def("write_sweep_csv", &write_sweep_csv, py::arg("points"), py::arg("swept_values"),
        py::arg("path"));
  m.def("emit_boxplot", &emit_boxplot, py::arg("per_suite"), py::arg("metric_name"),
        py::arg("svg_path"));
}
