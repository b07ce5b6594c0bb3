// Copyright 2026 The termforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Byte payloads (actions, corpora, streams) cross as `bytes`;
// frames are exposed as numpy arrays of codepoints and packed styles.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "termforge/acttok.hpp"
#include "termforge/common.hpp"
#include "termforge/frjt.hpp"
#include "termforge/maze.hpp"
#include "termforge/scaling.hpp"
#include "termforge/term.hpp"
#include "termforge/tszx.hpp"

namespace py = pybind11;
using namespace termforge;

namespace {

py::bytes to_bytes(std::string_view s) { return py::bytes(s.data(), s.size()); }

std::vector<term::Action> to_actions(const std::vector<std::string>& payloads) {
  std::vector<term::Action> out;
  out.reserve(payloads.size());
  for (const auto& p : payloads) out.push_back({p});
  return out;
}

py::list from_actions(const std::vector<term::Action>& actions) {
  py::list out;
  for (const auto& a : actions) out.append(to_bytes(a.payload));
  return out;
}

py::array_t<std::uint32_t> codepoints(const term::Frame& f) {
  py::array_t<std::uint32_t> a({f.height(), f.width()});
  auto* p = a.mutable_data();
  for (const auto& c : f.cells()) *p++ = static_cast<std::uint32_t>(c.cp);
  return a;
}

py::array_t<std::uint8_t> styles(const term::Frame& f) {
  py::array_t<std::uint8_t> a({f.height(), f.width()});
  auto* p = a.mutable_data();
  for (const auto& c : f.cells()) *p++ = c.style;
  return a;
}

/// Decodes straight into [frames, height, width] arrays without keeping Frame
/// objects around.
py::dict decode_arrays(const py::bytes& data) {
  const std::string bytes = data;
  std::vector<std::uint32_t> cps;
  std::vector<std::uint8_t> sts;
  const auto s = tszx::decode_each(bytes, [&](const term::Frame& f) {
    for (const auto& c : f.cells()) {
      cps.push_back(static_cast<std::uint32_t>(c.cp));
      sts.push_back(c.style);
    }
  });
  const auto cells = static_cast<std::size_t>(s.width) * static_cast<std::size_t>(s.height);
  const auto n = static_cast<py::ssize_t>(cells ? cps.size() / cells : 0);
  py::array_t<std::uint32_t> cp_arr({n, py::ssize_t(s.height), py::ssize_t(s.width)});
  py::array_t<std::uint8_t> st_arr({n, py::ssize_t(s.height), py::ssize_t(s.width)});
  std::copy(cps.begin(), cps.end(), cp_arr.mutable_data());
  std::copy(sts.begin(), sts.end(), st_arr.mutable_data());
  py::dict d;
  d["width"] = s.width;
  d["height"] = s.height;
  d["codepoints"] = cp_arr;
  d["styles"] = st_arr;
  d["actions"] = from_actions(s.actions);
  return d;
}

py::bytes encode_arrays(py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast> cps,
                        py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> sts,
                        const std::vector<std::string>& actions, bool zlib) {
  if (cps.ndim() != 3 || sts.ndim() != 3) throw InvalidArgument("expected [frames, height, width] arrays");
  for (int i = 0; i < 3; ++i) {
    if (cps.shape(i) != sts.shape(i)) throw InvalidArgument("codepoint and style arrays differ in shape");
  }
  const auto n = cps.shape(0);
  const int h = static_cast<int>(cps.shape(1)), w = static_cast<int>(cps.shape(2));
  tszx::Encoder enc(w, h, {zlib ? tszx::OuterStage::Zlib : tszx::OuterStage::None});
  if (actions.size() != static_cast<std::size_t>(n > 0 ? n - 1 : 0)) {
    throw InvalidArgument("need exactly frames - 1 actions");
  }
  const auto* cp = cps.data();
  const auto* st = sts.data();
  term::Frame f(w, h);
  for (py::ssize_t i = 0; i < n; ++i) {
    for (auto& c : f.cells()) {
      c.cp = static_cast<char32_t>(*cp++);
      c.style = *st++;
    }
    if (i > 0) enc.add_action({actions[static_cast<std::size_t>(i - 1)]});
    enc.add_frame(f);
  }
  return to_bytes(enc.finish());
}

py::dict report_dict(const tszx::Report& r) {
  py::dict d;
  d["width"] = r.width;
  d["height"] = r.height;
  d["frames"] = r.frames;
  d["actions"] = r.actions;
  d["palette_size"] = r.palette_size;
  d["index_bits"] = r.index_bits;
  d["encoded_bytes"] = r.encoded_bytes;
  d["naive_bytes"] = r.naive_bytes;
  d["ratio"] = r.ratio;
  d["zlib"] = r.stage == tszx::OuterStage::Zlib;
  return d;
}

}  // namespace

PYBIND11_MODULE(_termforge, m) {
  m.doc() = "termforge core bindings";

  // Registered base first: pybind11 tries the most recent translator first.
  static py::exception<Error> error(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<DataError>(m, "DataError", error.ptr());
  py::register_exception<AssertionFailure>(m, "AssertionFailure", error.ptr());

  m.def("derive_seed", [](std::uint64_t root, std::string_view name, std::uint64_t index) {
    return derive_seed(root, name, index);
  }, py::arg("root"), py::arg("name"), py::arg("index") = 0);

  // term
  auto term_m = m.def_submodule("term", "Terminal emulator");
  py::class_<term::Frame>(term_m, "Frame")
      .def_property_readonly("width", &term::Frame::width)
      .def_property_readonly("height", &term::Frame::height)
      .def("text", &term::Frame::to_text)
      .def("codepoints", &codepoints)
      .def("styles", &styles)
      .def("__eq__", [](const term::Frame& a, const term::Frame& b) { return a == b; });
  py::class_<term::Session>(term_m, "Session")
      .def(py::init([](int width, int height) { return term::Session({width, height}); }),
           py::arg("width") = term::Frame::kDefaultWidth, py::arg("height") = term::Frame::kDefaultHeight)
      .def("apply", [](term::Session& s, const py::bytes& payload) { s.apply(term::Action{std::string(payload)}); })
      .def("frame", &term::Session::frame, py::return_value_policy::copy)
      .def("vfs", [](const term::Session& s) {
        py::dict d;
        for (const auto& [k, v] : s.vfs()) d[py::str(k)] = to_bytes(v);
        return d;
      })
      .def_property_readonly("commits", &term::Session::commits);
  term_m.def("split_actions", [](const py::bytes& b) { return from_actions(term::split_actions(std::string(b))); });
  term_m.def("join_actions",
             [](const std::vector<std::string>& payloads) { return to_bytes(term::join_actions(to_actions(payloads))); });
  term_m.def("synthetic_workload",
             [](std::size_t count, std::uint64_t seed) { return from_actions(term::synthetic_workload(count, seed)); },
             py::arg("count"), py::arg("seed"));

  // tszx
  auto tszx_m = m.def_submodule("tszx", "Frame stream codec");
  tszx_m.def("decode", &decode_arrays, py::arg("data"),
             "Returns width, height, codepoints [F,H,W] uint32, styles [F,H,W] uint8 and actions.");
  tszx_m.def("encode", &encode_arrays, py::arg("codepoints"), py::arg("styles"), py::arg("actions"),
             py::arg("zlib") = false);
  tszx_m.def("report", [](const py::bytes& b) { return report_dict(tszx::compression_report(std::string(b))); });

  // frjt
  auto frjt_m = m.def_submodule("frjt", "Forward-referencing jump programs");
  frjt_m.def("generate", [](std::uint32_t depth, std::uint64_t seed) {
    return frjt::serialize(frjt::generate_program(depth, seed));
  }, py::arg("depth"), py::arg("seed"));
  frjt_m.def("interpret", [](std::string_view text) {
    const auto r = frjt::interpret(frjt::parse(text));
    return py::make_tuple(std::string(1, frjt::to_char(r.halt)), r.coverage(), r.steps);
  }, py::arg("program"), "Returns (halt label, coverage, steps) for a serialized program.");
  frjt_m.def("tokens", [](std::string_view text) { return frjt::token_stream(frjt::parse(text)); });
  frjt_m.def("from_tokens", [](std::string_view tokens) { return frjt::serialize(frjt::parse_token_stream(tokens)); });
  frjt_m.def("label_tokens", [](std::string_view tokens) {
    return std::string(1, frjt::to_char(frjt::interpret(frjt::parse_token_stream(tokens)).halt));
  });

  // maze
  auto maze_m = m.def_submodule("maze", "Maze trajectories");
  maze_m.def("parse_steps", [](std::string_view tokens) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : maze::parse_steps(tokens)) {
      const std::string_view fb = s.feedback == maze::Feedback::Withheld ? "WITHHELD"
                                  : s.feedback == maze::Feedback::Unchanged ? "UNCHANGED"
                                                                            : maze::to_string(s.intent);
      out.emplace_back(std::string(maze::to_string(s.intent)), std::string(fb));
    }
    return out;
  });

  // acttok
  auto tok_m = m.def_submodule("tok", "Action text tokenizer");
  py::class_<acttok::Vocab>(tok_m, "Vocab")
      .def(py::init<>())
      .def_static("parse", [](const py::bytes& b) { return acttok::Vocab::parse(std::string(b)); })
      .def("__len__", &acttok::Vocab::size)
      .def("encode", [](const acttok::Vocab& v, const py::bytes& b) { return v.encode(std::string(b)); })
      .def("decode", [](const acttok::Vocab& v, const std::vector<std::uint32_t>& ids) { return to_bytes(v.decode(ids)); })
      .def("token", [](const acttok::Vocab& v, std::uint32_t id) { return to_bytes(v.at(id).bytes); })
      .def("serialize", [](const acttok::Vocab& v) { return to_bytes(v.serialize()); });
  tok_m.def("train", [](const py::bytes& corpus, std::size_t vocab_size) {
    return acttok::train(std::string(corpus), vocab_size);
  }, py::arg("corpus"), py::arg("vocab_size"));
  tok_m.def("action_text", [](const std::vector<std::string>& payloads) {
    return to_bytes(acttok::action_text(to_actions(payloads)));
  });
  tok_m.def("coverage", [](const std::vector<std::uint32_t>& ids) { return acttok::coverage(ids); });

  // scaling
  auto sc = m.def_submodule("scaling", "Scaling-law fits and FLOP accounting");
  sc.def("fit_power_law", [](const std::vector<std::pair<double, double>>& pts, double s) {
    const auto f = scaling::fit_power_law(pts, s);
    return py::dict(py::arg("A") = f.A, py::arg("alpha") = f.alpha, py::arg("r2") = f.r2, py::arg("s") = f.s);
  }, py::arg("points"), py::arg("s") = 0.0);
  sc.def("fit_alpha_dynamics", [](const std::vector<std::pair<double, double>>& pts) {
    const auto d = scaling::fit_alpha_dynamics(pts);
    return py::dict(py::arg("alpha_inf") = d.alpha_inf, py::arg("tau") = d.tau, py::arg("rss") = d.rss);
  });
  sc.def("estimate_flops", [](double B, double D, double N_f, int P, int L_t, double T_s, int L_s, double H) {
    scaling::FlopConfig c;
    c.B = B;
    c.D = D;
    c.N_f = N_f;
    c.P = P;
    c.L_t = L_t;
    c.T_s = T_s;
    c.L_s = L_s;
    c.H = H;
    const auto t = scaling::estimate_flops(c);
    py::list rows;
    for (const auto& r : t.rows) rows.append(py::make_tuple(r.label, r.flops, r.share));
    return py::dict(py::arg("rows") = rows, py::arg("frame_head") = t.frame_head, py::arg("main") = t.main,
                    py::arg("total") = t.total);
  }, py::arg("B") = 512, py::arg("D") = 768, py::arg("N_f") = 7680, py::arg("P") = 2, py::arg("L_t") = 3,
     py::arg("T_s") = 1024, py::arg("L_s") = 2, py::arg("H") = 768);
}
