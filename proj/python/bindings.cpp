#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mnet/code.hpp"
#include "mnet/mnetwork.hpp"
#include "mnet/network.hpp"
#include "mnet/polymatroid.hpp"
#include "mnet/solver.hpp"
#include "mnet/theorem.hpp"
#include "mnet/version.hpp"

namespace py = pybind11;
using namespace mnet;

namespace {

MessageRef ref_from_pair(const std::pair<std::string, std::string>& p) {
    if (p.first == "source") return {MessageRef::Kind::Source, p.second};
    if (p.first == "edge") return {MessageRef::Kind::Edge, p.second};
    throw py::value_error("ref kind must be 'source' or 'edge', got '" + p.first + "'");
}

Matrix matrix_from_rows(const PrimeField& f, const std::vector<std::vector<uint32_t>>& rows) {
    size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<uint32_t> flat;
    for (const auto& r : rows) {
        if (r.size() != cols) throw py::value_error("ragged matrix rows");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return Matrix(PrimeField(f), rows.size(), cols, std::move(flat));
}

}  // namespace

PYBIND11_MODULE(_mnetcode, m) {
    m.doc() = "vector linear network codes on the m-parameterized relay family";

    m.def("version", [] { return std::string(kVersion); });

    m.def(
        "gen_network",
        [](size_t mm, bool pretty) { return serialize_network(build_mnetwork(mm), pretty); },
        py::arg("m"), py::arg("pretty") = false,
        "Network JSON for the m-parameterized construction.");

    m.def(
        "routing_code",
        [](size_t mm, uint32_t p, bool pretty) {
            return serialize_code(routing_code(mm, PrimeField(p)), pretty);
        },
        py::arg("m"), py::arg("p"), py::arg("pretty") = false,
        "The explicit (m,m) block-routing solution as code JSON.");

    m.def(
        "validate_network",
        [](const std::string& text) {
            py::list out;
            for (const Violation& v : parse_network(text).validate()) {
                py::dict d;
                d["kind"] = v.kind;
                d["subject"] = v.subject;
                d["detail"] = v.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("network_json"), "Structural violations as a list of dicts (empty = clean).");

    m.def(
        "verify",
        [](const std::string& net_text, const std::string& code_text, bool pretty) {
            Network net = parse_network(net_text);
            LinearCode code = parse_code(code_text);
            return verdict_to_json(verify_solution(net, code), pretty);
        },
        py::arg("network_json"), py::arg("code_json"), py::arg("pretty") = false,
        "Verdict JSON: per-terminal decodability and overall solution flag.");

    m.def(
        "search",
        [](const std::string& net_text, uint32_t p, size_t d, std::optional<uint64_t> budget,
           bool canonicalize, size_t shards, bool pretty) {
            Network net = parse_network(net_text);
            SearchConfig cfg;
            cfg.field = PrimeField(p);
            cfg.d = d;
            cfg.budget = budget;
            cfg.canonicalize_sources = canonicalize;
            cfg.shards = shards;
            SearchOutcome out = search(net, cfg);
            return certify(net, cfg, out, pretty);
        },
        py::arg("network_json"), py::arg("p"), py::arg("d"), py::arg("budget") = py::none(),
        py::arg("canonicalize") = true, py::arg("shards") = 1, py::arg("pretty") = false,
        "Exhaustive (or budgeted) hunt for a (d,d) solution; returns the certificate JSON.");

    m.def(
        "ledger",
        [](const std::string& net_text, const std::string& code_text, bool allow_nonsolution,
           bool pretty) {
            Network net = parse_network(net_text);
            LinearCode code = parse_code(code_text);
            size_t mm = net.source_order().size();
            size_t root = 1;
            while (root * root < mm) ++root;
            return ledger_to_json(run_ledger(MnetLayout(root), net, code, allow_nonsolution),
                                  pretty);
        },
        py::arg("network_json"), py::arg("code_json"), py::arg("allow_nonsolution") = false,
        py::arg("pretty") = false,
        "Full inequality ledger for a code on the m-parameterized construction.");

    m.def(
        "check_axioms",
        [](const std::string& table_text, bool pretty) {
            return axiom_report_to_json(check_axioms(parse_rank_table(table_text)), pretty);
        },
        py::arg("table_json"), py::arg("pretty") = false,
        "Axiom report JSON for a rank table (normalization, monotonicity, submodularity).");

    m.def(
        "rho_max",
        [](const std::string& table_text) { return rho_max(parse_rank_table(table_text)); },
        py::arg("table_json"), "Least d such that rank(A) <= d|A| everywhere.");

    m.def(
        "membership",
        [](const std::vector<uint64_t>& v, const std::string& table_text) {
            return membership(v, parse_rank_table(table_text));
        },
        py::arg("vector"), py::arg("table_json"),
        "True iff the integer vector lies in the polymatroid of the table.");

    m.def(
        "from_subspaces",
        [](uint32_t p, const std::vector<std::vector<std::vector<uint32_t>>>& families,
           bool pretty) {
            PrimeField f(p);
            std::vector<Matrix> mats;
            for (const auto& rows : families) mats.push_back(matrix_from_rows(f, rows));
            return serialize_rank_table(from_subspaces(mats), pretty);
        },
        py::arg("p"), py::arg("subspaces"), py::arg("pretty") = false,
        "Rank table JSON of the subspace family; each subspace is a list of rows.");

    m.def(
        "terminal_tuple",
        [](size_t mm, size_t k) { return MnetLayout(mm).terminal_tuple(k); }, py::arg("m"),
        py::arg("k"), "Demand tuple (j_1..j_m) of terminal t_k, 1-based.");

    m.def(
        "tuple_terminal",
        [](size_t mm, const std::vector<size_t>& tuple) {
            return MnetLayout(mm).tuple_terminal(tuple);
        },
        py::arg("m"), py::arg("tuple"), "Terminal index k demanding the given tuple.");

    m.def(
        "rank_of",
        [](const std::string& net_text, const std::string& code_text,
           const std::vector<std::pair<std::string, std::string>>& refs) {
            Network net = parse_network(net_text);
            LinearCode code = parse_code(code_text);
            RankOracle oracle = induced_rank_oracle(net, code);
            std::vector<MessageRef> q;
            for (const auto& r : refs) q.push_back(ref_from_pair(r));
            return oracle.query(std::move(q));
        },
        py::arg("network_json"), py::arg("code_json"), py::arg("refs"),
        "Rank of a set of messages under the code-induced rank function; each ref is a\n"
        "('source'|'edge', id) pair.");
}
