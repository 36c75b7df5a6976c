#include "rmdp/model_io.hpp"

#include <fstream>
#include <unordered_map>

namespace rmdp {

using nlohmann::json;

namespace {

std::unordered_map<std::string, int> index_of(const std::vector<std::string>& names, const char* what) {
    std::unordered_map<std::string, int> idx;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!idx.emplace(names[i], static_cast<int>(i)).second)
            throw ParseError(std::string("duplicate ") + what + " name '" + names[i] + "'");
    return idx;
}

int lookup(const std::unordered_map<std::string, int>& idx, const json& key, const char* what) {
    if (!key.is_string()) throw ParseError(std::string(what) + " reference must be a name string");
    const auto it = idx.find(key.get<std::string>());
    if (it == idx.end()) throw ParseError(std::string("unknown ") + what + " '" + key.get<std::string>() + "'");
    return it->second;
}

json dist_to_json(const FiniteDistribution& d, const std::vector<std::string>& names) {
    json out = json::array();
    for (std::size_t i = 0; i < d.support.size(); ++i) out.push_back({names[d.support[i]], d.probs[i]});
    return out;
}

FiniteDistribution dist_from_json(const json& j, const std::unordered_map<std::string, int>& idx) {
    if (!j.is_array()) throw ParseError("distribution must be a list of [state, p] pairs");
    FiniteDistribution d;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[1].is_number())
            throw ParseError("distribution entry must be [state, p], got " + e.dump());
        d.support.push_back(lookup(idx, e[0], "state"));
        d.probs.push_back(e[1].get<double>());
    }
    return d;
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

}  // namespace

json model_to_json(const FiniteRMDP& m) {
    json j;
    j["alphabet"] = m.alphabet;
    json states = json::array();
    for (int x = 0; x < m.num_states(); ++x) {
        json labels = json::array();
        for (std::size_t l = 0; l < m.alphabet.size(); ++l)
            if (m.labels[x].has(static_cast<int>(l))) labels.push_back(m.alphabet[l]);
        states.push_back({{"name", m.state_names[x]}, {"labels", labels}});
    }
    j["states"] = states;
    j["actions"] = m.action_names;
    j["disturbances"] = m.disturbance_names;
    j["init"] = dist_to_json(m.init, m.state_names);
    json kernel = json::array();
    for (int x = 0; x < m.num_states(); ++x)
        for (int u = 0; u < m.num_actions(); ++u)
            for (int v = 0; v < m.num_disturbances(); ++v) {
                const auto& d = m.kernel[m.kernel_index(x, u, v)];
                if (d.empty()) continue;
                kernel.push_back({{"x", m.state_names[x]},
                                  {"u", m.action_names[u]},
                                  {"v", m.disturbance_names[v]},
                                  {"successors", dist_to_json(d, m.state_names)}});
            }
    j["kernel"] = kernel;
    return j;
}

FiniteRMDP model_from_json(const json& j) {
    FiniteRMDP m;
    try {
        m.alphabet = field(j, "alphabet").get<std::vector<std::string>>();
        if (m.alphabet.size() > kMaxLabels) throw ParseError("alphabet exceeds 64 labels");
        const auto label_idx = index_of(m.alphabet, "label");
        for (const auto& s : field(j, "states")) {
            m.state_names.push_back(field(s, "name").get<std::string>());
            LabelSet ls;
            if (s.contains("labels"))
                for (const auto& l : s.at("labels")) ls.insert(lookup(label_idx, l, "label"));
            m.labels.push_back(ls);
        }
        m.action_names = field(j, "actions").get<std::vector<std::string>>();
        m.disturbance_names = field(j, "disturbances").get<std::vector<std::string>>();
        const auto state_idx = index_of(m.state_names, "state");
        const auto action_idx = index_of(m.action_names, "action");
        const auto dist_idx = index_of(m.disturbance_names, "disturbance");
        m.init = dist_from_json(field(j, "init"), state_idx);
        m.resize_kernel();
        for (const auto& e : field(j, "kernel")) {
            const int x = lookup(state_idx, field(e, "x"), "state");
            const int u = lookup(action_idx, field(e, "u"), "action");
            const int v = lookup(dist_idx, field(e, "v"), "disturbance");
            auto& slot = m.next_mut(x, u, v);
            if (!slot.empty())
                throw ParseError("duplicate kernel entry for (" + m.state_names[x] + "," + m.action_names[u] + "," +
                                 m.disturbance_names[v] + ")");
            slot = dist_from_json(field(e, "successors"), state_idx);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model JSON: ") + e.what());
    }
    return m;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

FiniteRMDP read_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

void write_model(const FiniteRMDP& m, const std::filesystem::path& path) { write_json_file(model_to_json(m), path); }

json relation_to_json(const StateRelation& r, const FiniteRMDP& m1, const FiniteRMDP& m2) {
    json out = json::array();
    for (auto [a, b] : r.pairs()) out.push_back({m1.state_names[a], m2.state_names[b]});
    return out;
}

StateRelation relation_from_json(const json& j, const FiniteRMDP& m1, const FiniteRMDP& m2) {
    if (!j.is_array()) throw ParseError("relation must be a list of [state1, state2] pairs");
    const auto idx1 = index_of(m1.state_names, "state");
    const auto idx2 = index_of(m2.state_names, "state");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) throw ParseError("relation entry must be a pair, got " + e.dump());
        pairs.emplace_back(lookup(idx1, e[0], "state"), lookup(idx2, e[1], "state"));
    }
    return {m1.num_states(), m2.num_states(), std::move(pairs)};
}

StateRelation read_relation(const std::filesystem::path& path, const FiniteRMDP& m1, const FiniteRMDP& m2) {
    return relation_from_json(read_json_file(path), m1, m2);
}

}  // namespace rmdp
