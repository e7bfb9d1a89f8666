#include "mwdp/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace mwdp {

namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw input_error(errc::schema_error, "not valid JSON");
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw input_error(errc::schema_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw input_error(errc::schema_error, "cannot write " + path);
    out << text;
}

void expect_schema(const json& j, const char* marker,
                   std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw input_error(errc::schema_error, "document must be a JSON object");
    if (!j.contains("schema") || !j["schema"].is_string() ||
        j["schema"].get<std::string>() != marker)
        throw input_error(errc::schema_error,
                          std::string("schema marker must be \"") + marker + "\"");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = key == "schema";
        for (const char* k : allowed) known = known || key == k;
        if (!known)
            throw input_error(errc::schema_error, "unknown field: " + key);
    }
}

int64_t get_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw input_error(errc::schema_error, std::string("missing integer field: ") + key);
    return j[key].get<int64_t>();
}

bool get_bool(const json& j, const char* key, bool fallback, bool required) {
    if (!j.contains(key)) {
        if (required)
            throw input_error(errc::schema_error, std::string("missing field: ") + key);
        return fallback;
    }
    if (!j[key].is_boolean())
        throw input_error(errc::schema_error, std::string("field must be boolean: ") + key);
    return j[key].get<bool>();
}

Transition parse_transition(const json& e) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
        throw input_error(errc::schema_error,
                          "transition entries must be [next_state, reward]");
    return {e[0].get<int32_t>(), e[1].get<int64_t>()};
}

} // namespace

DpInstance load_instance_json(const std::string& text) {
    json j = parse(text);
    expect_schema(j, "dp-instance/1",
                  {"num_states", "num_actions", "horizon", "initial_state",
                   "time_dependent", "layered", "layer_of", "transitions"});
    InstanceData raw;
    raw.num_states = static_cast<int32_t>(get_int(j, "num_states"));
    raw.num_actions = static_cast<int32_t>(get_int(j, "num_actions"));
    raw.horizon = static_cast<int32_t>(get_int(j, "horizon"));
    raw.initial_state = static_cast<int32_t>(get_int(j, "initial_state"));
    raw.time_dependent = get_bool(j, "time_dependent", false, true);
    raw.layered = get_bool(j, "layered", false, false);
    if (j.contains("layer_of")) {
        if (!raw.layered)
            throw input_error(errc::schema_error, "layer_of requires layered: true");
        if (!j["layer_of"].is_array())
            throw input_error(errc::schema_error, "layer_of must be an array");
        for (const auto& e : j["layer_of"]) {
            if (!e.is_number_integer())
                throw input_error(errc::schema_error, "layer_of entries must be integers");
            raw.layer_of.push_back(e.get<int32_t>());
        }
    } else if (raw.layered) {
        throw input_error(errc::schema_error, "layered instances must list layer_of");
    }

    if (!j.contains("transitions") || !j["transitions"].is_array())
        throw input_error(errc::schema_error, "transitions must be an array");
    const json& table = j["transitions"];
    auto parse_state_rows = [&](const json& rows) {
        if (!rows.is_array() || rows.size() != static_cast<std::size_t>(raw.num_states))
            throw input_error(errc::schema_error, "transitions must list every state");
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != static_cast<std::size_t>(raw.num_actions))
                throw input_error(errc::schema_error, "state rows must list every action");
            for (const auto& e : row) raw.transitions.push_back(parse_transition(e));
        }
    };
    if (raw.time_dependent) {
        if (table.size() != static_cast<std::size_t>(raw.horizon))
            throw input_error(errc::schema_error, "transitions must list every time step");
        for (const auto& step : table) parse_state_rows(step);
    } else {
        parse_state_rows(table);
    }
    return validate_instance(raw);
}

DpInstance load_instance_file(const std::string& path) {
    return load_instance_json(slurp(path));
}

std::string save_instance_json(const DpInstance& inst) {
    ordered_json j;
    j["schema"] = "dp-instance/1";
    j["num_states"] = inst.num_states;
    j["num_actions"] = inst.num_actions;
    j["horizon"] = inst.horizon;
    j["initial_state"] = inst.initial_state;
    j["time_dependent"] = inst.time_dependent;
    if (inst.layered) {
        j["layered"] = true;
        j["layer_of"] = inst.layer_of;
    }
    auto state_rows = [&](int32_t t) {
        ordered_json rows = ordered_json::array();
        for (int32_t s = 0; s < inst.num_states; ++s) {
            ordered_json row = ordered_json::array();
            for (int32_t a = 0; a < inst.num_actions; ++a) {
                const Transition& tr = inst.at(t, s, a);
                row.push_back({tr.next, tr.reward});
            }
            rows.push_back(std::move(row));
        }
        return rows;
    };
    if (inst.time_dependent) {
        ordered_json steps = ordered_json::array();
        for (int32_t t = 0; t < inst.horizon; ++t) steps.push_back(state_rows(t));
        j["transitions"] = std::move(steps);
    } else {
        j["transitions"] = state_rows(0);
    }
    return j.dump();
}

void save_instance_file(const DpInstance& inst, const std::string& path) {
    spill(path, save_instance_json(inst) + "\n");
}

TspGraph load_tsp_json(const std::string& text) {
    json j = parse(text);
    expect_schema(j, "tsp/1", {"n", "cost_bound", "costs"});
    TspGraph g;
    g.n = static_cast<int32_t>(get_int(j, "n"));
    g.cost_bound = get_int(j, "cost_bound");
    if (!j.contains("costs") || !j["costs"].is_array())
        throw input_error(errc::schema_error, "costs must be an array");
    for (const auto& row : j["costs"]) {
        if (!row.is_array())
            throw input_error(errc::schema_error, "cost rows must be arrays");
        std::vector<int64_t> r;
        for (const auto& e : row) {
            if (!e.is_number_integer())
                throw input_error(errc::schema_error, "costs must be integers");
            r.push_back(e.get<int64_t>());
        }
        g.costs.push_back(std::move(r));
    }
    return g;
}

TspGraph load_tsp_file(const std::string& path) { return load_tsp_json(slurp(path)); }

std::string save_tsp_json(const TspGraph& g) {
    ordered_json j;
    j["schema"] = "tsp/1";
    j["n"] = g.n;
    j["cost_bound"] = g.cost_bound;
    j["costs"] = g.costs;
    return j.dump();
}

MscInstance load_msc_json(const std::string& text) {
    json j = parse(text);
    expect_schema(j, "msc/1", {"universe_size", "sets"});
    MscInstance in;
    in.universe_size = static_cast<int32_t>(get_int(j, "universe_size"));
    if (!j.contains("sets") || !j["sets"].is_array())
        throw input_error(errc::schema_error, "sets must be an array");
    for (const auto& row : j["sets"]) {
        if (!row.is_array())
            throw input_error(errc::schema_error, "each set must be an array");
        std::vector<int32_t> r;
        for (const auto& e : row) {
            if (!e.is_number_integer())
                throw input_error(errc::schema_error, "set elements must be integers");
            r.push_back(e.get<int32_t>());
        }
        in.sets.push_back(std::move(r));
    }
    return in;
}

MscInstance load_msc_file(const std::string& path) { return load_msc_json(slurp(path)); }

std::string save_msc_json(const MscInstance& in) {
    ordered_json j;
    j["schema"] = "msc/1";
    j["universe_size"] = in.universe_size;
    j["sets"] = in.sets;
    return j.dump();
}

std::string report_json(const SolveReport& rep) {
    ordered_json j;
    j["schema"] = "dp-report/1";
    j["sigma_bar"] = rep.sigma_bar;
    j["action"] = rep.chosen_action;
    j["lambda_s0"] = rep.lambda_at_start_pair;
    j["delta_used"] = rep.delta_used;
    j["escalations"] = rep.escalations;
    j["rounds_per_probe"] = rep.rounds_per_probe;
    j["bisection_steps"] = rep.bisection_steps;
    j["ledger"] = {{"qmf_runs", rep.ledger.qmf_runs},
                   {"modeled_queries", rep.ledger.modeled_queries},
                   {"scan_evaluations", rep.ledger.scan_evaluations}};
    j["certified"] = rep.certified;
    j["wallclock_ms"] = rep.wallclock_ms;
    return j.dump();
}

void write_transcript_jsonl(const FeasibilityTranscript& tr, std::ostream& os) {
    for (const auto& r : tr.rounds) {
        ordered_json j;
        j["round"] = r.round;
        if (tr.record_p) j["p"] = r.p;
        j["chosen_vertex"] = r.token;
        ordered_json m = ordered_json::array();
        for (auto [i, v] : r.m_sparse) m.push_back({i, v});
        j["m_sparse"] = std::move(m);
        j["accepted"] = r.accepted;
        os << j.dump() << "\n";
    }
}

} // namespace mwdp
