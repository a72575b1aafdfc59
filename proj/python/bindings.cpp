#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "memqa/bm25.hpp"
#include "memqa/calendar.hpp"
#include "memqa/engine.hpp"
#include "memqa/error.hpp"
#include "memqa/fusion.hpp"
#include "memqa/metrics.hpp"
#include "memqa/prompts.hpp"
#include "memqa/ranksvm.hpp"
#include "memqa/service.hpp"
#include "memqa/synthetic.hpp"
#include "memqa/temporal.hpp"

namespace py = pybind11;

namespace {

using Signals = std::tuple<double, double, double, double>;

memqa::SignalVector signals_of(const Signals& s) {
  return {std::get<0>(s), std::get<1>(s), std::get<2>(s), std::get<3>(s)};
}

memqa::FusionWeights weights_of(const Signals& w) {
  return {std::get<0>(w), std::get<1>(w), std::get<2>(w), std::get<3>(w), {}, std::nullopt};
}

// JSON crosses the boundary as text; the Python wrapper decodes it.
class PyEngine {
 public:
  PyEngine(const std::string& config_json, const std::string& base_dir)
      : engine_(memqa::config_from_json(nlohmann::json::parse(config_json), base_dir)) {}

  std::pair<int, std::string> record(const std::string& body) {
    py::gil_scoped_release release;
    auto r = memqa::handle_record(engine_, body);
    return {r.status, r.body.dump()};
  }
  std::pair<int, std::string> query(const std::string& body) const {
    py::gil_scoped_release release;
    auto r = memqa::handle_query(engine_, body);
    return {r.status, r.body.dump()};
  }
  std::pair<std::size_t, std::size_t> ingest(const std::string& path) {
    py::gil_scoped_release release;
    auto r = engine_.ingest_file(path);
    return {r.added, r.skipped};
  }
  std::pair<std::size_t, std::size_t> augment_pending() {
    py::gil_scoped_release release;
    auto r = engine_.augment_pending();
    return {r.augmented, r.failed};
  }
  std::string evaluate(const std::string& bench_path, bool generate) const {
    py::gil_scoped_release release;
    return memqa::to_json(engine_.evaluate(memqa::load_benchmark(bench_path), generate)).dump();
  }
  std::size_t size() const { return engine_.store().size(); }

 private:
  memqa::Engine engine_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "memqa core bindings";

  static py::exception<memqa::Error> error(m, "MemqaError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const memqa::Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("recency_score", [](double delta_seconds, bool recent) { return memqa::recency_score(delta_seconds, recent); },
        py::arg("delta_seconds"), py::arg("recent") = true);

  m.def(
      "parse_temporal",
      [](const std::string& question, std::int64_t asked_at, int tz) {
        auto p = memqa::parse_temporal_rules({question, asked_at, tz});
        return memqa::to_json(p).dump();
      },
      py::arg("question"), py::arg("asked_at"), py::arg("tz_offset_minutes") = 0);

  m.def("parse_instant", [](const std::string& s) { return memqa::parse_iso_instant(s); });

  m.def(
      "bm25_scores",
      [](const std::vector<std::string>& docs, const std::string& query, double k1, double b) {
        memqa::Bm25Corpus corpus(docs, {k1, b});
        std::vector<double> out;
        for (std::size_t i = 0; i < docs.size(); ++i) out.push_back(corpus.score(i, query));
        return out;
      },
      py::arg("docs"), py::arg("query"), py::arg("k1") = 1.2, py::arg("b") = 0.75);

  m.def(
      "embed_text",
      [](const std::string& text, std::size_t dim) { return memqa::HashingEmbedder(dim).embed_text(text); },
      py::arg("text"), py::arg("dim") = 256);

  m.def("fuse", [](const Signals& s, const Signals& w) { return memqa::fuse(signals_of(s), weights_of(w)); },
        py::arg("signals"), py::arg("weights"));
  m.def("published_weights", [] {
    auto w = memqa::FusionWeights::published();
    return Signals{w.w_t, w.w_r, w.w_l, w.w_s};
  });

  m.def(
      "train_weights",
      [](const std::vector<std::vector<std::pair<Signals, bool>>>& groups, double c_reg) {
        memqa::RankTrainingSet data;
        for (const auto& g : groups) {
          auto& q = data.queries.emplace_back();
          for (const auto& [s, positive] : g) q.push_back({signals_of(s), positive});
        }
        memqa::RankSvmOptions opts;
        opts.c_reg = c_reg;
        auto r = memqa::train_weights(data, opts);
        return Signals{r.weights.w_t, r.weights.w_r, r.weights.w_l, r.weights.w_s};
      },
      py::arg("groups"), py::arg("c_reg") = 1.0);

  m.def("recall_at_k", &memqa::recall_at_k, py::arg("ranked"), py::arg("positives"), py::arg("k"));
  m.def("ndcg_at_k", &memqa::ndcg_at_k, py::arg("ranked"), py::arg("positives"), py::arg("k"));
  m.def(
      "a_key",
      [](const std::string& candidate, const std::string& gold, const std::string& category) {
        return memqa::a_key(candidate, gold, memqa::category_from_string(category), memqa::AnswerDomains::defaults());
      },
      py::arg("candidate"), py::arg("gold"), py::arg("category") = "other");

  m.def("prompt_ids", &memqa::prompts::ids);
  m.def(
      "render_prompt",
      [](const std::string& id, const std::map<std::string, std::string>& values) {
        return memqa::prompts::render(memqa::prompts::get(id), values);
      },
      py::arg("id"), py::arg("values") = std::map<std::string, std::string>{});

  m.def(
      "write_synthetic_suite",
      [](const std::string& dir, std::uint64_t seed, std::size_t cases) {
        memqa::E2eSuiteOptions o;
        o.seed = seed;
        o.cases = cases;
        auto s = memqa::write_e2e_suite(dir, o);
        return std::make_tuple(s.memories.string(), s.benchmark.string(), s.memory_count);
      },
      py::arg("dir"), py::arg("seed") = 11, py::arg("cases") = 200);

  py::class_<PyEngine>(m, "_Engine")
      .def(py::init<const std::string&, const std::string&>(), py::arg("config_json"), py::arg("base_dir") = "")
      .def("record", &PyEngine::record)
      .def("query", &PyEngine::query)
      .def("ingest", &PyEngine::ingest)
      .def("augment_pending", &PyEngine::augment_pending)
      .def("evaluate", &PyEngine::evaluate, py::arg("bench_path"), py::arg("generate") = false)
      .def("__len__", &PyEngine::size);
}
