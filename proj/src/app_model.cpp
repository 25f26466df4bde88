#include "divgen/app_model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "divgen/errors.hpp"
#include "divgen/io_util.hpp"
#include "divgen/rng.hpp"

namespace divgen {

void validate(const AppModel& model) {
    if (model.alphabet_size < 1) throw ParseError("model: alphabet_size must be >= 1");
    if (model.total_blocks < 1) throw ParseError("model: total_blocks must be >= 1");
    if (model.states.empty()) throw ParseError("model: states must be non-empty");
    std::set<int> state_set(model.states.begin(), model.states.end());
    if (state_set.size() != model.states.size())
        throw ParseError("model: states contains duplicates");
    if (!state_set.count(model.initial_state))
        throw ParseError("model: initial_state is not a listed state");
    for (const auto& [key, tr] : model.transitions) {
        if (!state_set.count(key.first))
            throw ParseError("model: transitions.from references an unknown state");
        if (key.second < 0 || key.second >= model.alphabet_size)
            throw ParseError("model: transitions.event is outside the alphabet");
        if (!state_set.count(tr.to))
            throw ParseError("model: transitions.to references an unknown state");
        for (int b : tr.blocks)
            if (b < 0 || b >= model.total_blocks)
                throw ParseError("model: transitions.blocks contains an id >= total_blocks");
        if (model.crash_rules.count(key))
            throw ParseError("model: crash_rules overlaps transitions on a (state, event) key");
    }
    for (const auto& [key, sig] : model.crash_rules) {
        if (!state_set.count(key.first))
            throw ParseError("model: crash_rules.state references an unknown state");
        if (key.second < 0 || key.second >= model.alphabet_size)
            throw ParseError("model: crash_rules.event is outside the alphabet");
        if (sig < 0) throw ParseError("model: crash_rules.signature must be >= 0");
    }
}

CompiledApp::CompiledApp(const AppModel& model)
    : alphabet_size_(model.alphabet_size),
      total_blocks_(model.total_blocks),
      n_states_(static_cast<int>(model.states.size())) {
    std::vector<int> sorted_states = model.states;
    std::sort(sorted_states.begin(), sorted_states.end());
    auto dense = [&](int state_id) {
        return static_cast<int>(
            std::lower_bound(sorted_states.begin(), sorted_states.end(), state_id) -
            sorted_states.begin());
    };
    initial_dense_ = dense(model.initial_state);
    size_t slots = static_cast<size_t>(n_states_) * alphabet_size_;
    next_state_.resize(slots);
    crash_signature_.assign(slots, -1);
    block_begin_.assign(slots + 1, 0);
    for (size_t s = 0; s < slots; ++s)
        next_state_[s] = static_cast<int>(s) / alphabet_size_;  // default self-loop
    std::vector<std::vector<int>> slot_blocks(slots);
    for (const auto& [key, tr] : model.transitions) {
        size_t slot = static_cast<size_t>(dense(key.first)) * alphabet_size_ + key.second;
        next_state_[slot] = dense(tr.to);
        slot_blocks[slot] = tr.blocks;
    }
    for (const auto& [key, sig] : model.crash_rules) {
        size_t slot = static_cast<size_t>(dense(key.first)) * alphabet_size_ + key.second;
        crash_signature_[slot] = sig;
    }
    for (size_t s = 0; s < slots; ++s) {
        block_begin_[s] = static_cast<int>(block_ids_.size());
        block_ids_.insert(block_ids_.end(), slot_blocks[s].begin(), slot_blocks[s].end());
    }
    block_begin_[slots] = static_cast<int>(block_ids_.size());
}

EvaluationResult CompiledApp::evaluate(const TestSuite& suite,
                                       bool length_objective_mean) const {
    std::vector<uint8_t> covered(total_blocks_, 0);
    int covered_count = 0;
    std::set<int> signatures;
    EvaluationResult result;
    int64_t total_length = 0;
    for (size_t ci = 0; ci < suite.cases.size(); ++ci) {
        const TestCase& c = suite.cases[ci];
        total_length += static_cast<int64_t>(c.size());
        int state = initial_dense_;
        for (size_t j = 0; j < c.size(); ++j) {
            Event e = c[j];
            if (e < 0 || e >= alphabet_size_)
                throw std::invalid_argument("evaluate: event id outside the model alphabet");
            size_t slot = static_cast<size_t>(state) * alphabet_size_ + e;
            int sig = crash_signature_[slot];
            if (sig >= 0) {
                signatures.insert(sig);
                result.per_case_crash.push_back(
                    {static_cast<int>(ci), sig, static_cast<int>(j)});
                break;  // the crash ends this case; later cases still run
            }
            for (int b = block_begin_[slot]; b < block_begin_[slot + 1]; ++b) {
                if (!covered[block_ids_[b]]) {
                    covered[block_ids_[b]] = 1;
                    ++covered_count;
                }
            }
            state = next_state_[slot];
        }
    }
    result.crash_signatures.assign(signatures.begin(), signatures.end());
    for (int b = 0; b < total_blocks_; ++b)
        if (covered[b]) result.covered_blocks.push_back(b);
    result.fitness.crashes = static_cast<int>(signatures.size());
    result.fitness.coverage = static_cast<double>(covered_count) / total_blocks_;
    result.fitness.length =
        length_objective_mean && !suite.cases.empty()
            ? static_cast<double>(total_length) / static_cast<double>(suite.cases.size())
            : static_cast<double>(total_length);
    return result;
}

EvaluationResult evaluate(const TestSuite& suite, const AppModel& model,
                          bool length_objective_mean) {
    return CompiledApp(model).evaluate(suite, length_objective_mean);
}

AppModel generate_model(uint64_t seed, const ModelGenParams& params) {
    if (params.n_states < 1 || params.alphabet_size < 1 || params.total_blocks < 1)
        throw ConfigError("generate_model: n_states, alphabet_size and total_blocks must be >= 1");
    if (params.n_crash_rules < 0)
        throw ConfigError("generate_model: n_crash_rules must be >= 0");
    if (params.branching < 0.0 || params.branching > 1.0)
        throw ConfigError("generate_model: branching must lie in [0, 1]");
    int64_t slots = static_cast<int64_t>(params.n_states) * params.alphabet_size;
    int64_t tree_edges = params.n_states - 1;
    if (params.n_crash_rules > slots - tree_edges)
        throw ConfigError("generate_model: n_crash_rules exceeds the free (state, event) slots "
                          "left after the reachability tree (n_states * alphabet_size - "
                          "(n_states - 1))");

    SplitMix64 rng(derive_seed({seed, kStreamModelGen}));
    AppModel model;
    model.alphabet_size = params.alphabet_size;
    model.initial_state = 0;
    model.states.resize(params.n_states);
    for (int s = 0; s < params.n_states; ++s) model.states[s] = s;
    model.total_blocks = params.total_blocks;

    auto draw_blocks = [&]() {
        int count = rng.uniform_int(0, 4);
        std::set<int> ids;
        for (int i = 0; i < count; ++i)
            ids.insert(static_cast<int>(rng.uniform_index(params.total_blocks)));
        return std::vector<int>(ids.begin(), ids.end());
    };

    std::vector<int> used_events(params.n_states, 0);
    std::vector<uint8_t> used(static_cast<size_t>(slots), 0);
    // Tree edges first: state s is reached from an earlier state, so every
    // state is reachable from the initial one.
    for (int s = 1; s < params.n_states; ++s) {
        std::vector<int> parents;
        for (int p = 0; p < s; ++p)
            if (used_events[p] < params.alphabet_size) parents.push_back(p);
        int p = parents[rng.uniform_index(parents.size())];
        std::vector<int> free_events;
        for (int e = 0; e < params.alphabet_size; ++e)
            if (!used[static_cast<size_t>(p) * params.alphabet_size + e]) free_events.push_back(e);
        int e = free_events[rng.uniform_index(free_events.size())];
        model.transitions[{p, e}] = Transition{s, draw_blocks()};
        used[static_cast<size_t>(p) * params.alphabet_size + e] = 1;
        ++used_events[p];
    }
    // Crash rules on free slots, signatures assigned in (state, event) order.
    std::vector<int64_t> free_slots;
    for (int64_t s = 0; s < slots; ++s)
        if (!used[s]) free_slots.push_back(s);
    rng.shuffle(free_slots);
    std::vector<int64_t> crash_slots(free_slots.begin(), free_slots.begin() + params.n_crash_rules);
    std::sort(crash_slots.begin(), crash_slots.end());
    for (size_t i = 0; i < crash_slots.size(); ++i) {
        int state = static_cast<int>(crash_slots[i] / params.alphabet_size);
        int event = static_cast<int>(crash_slots[i] % params.alphabet_size);
        model.crash_rules[{state, event}] = static_cast<int>(i);
        used[crash_slots[i]] = 1;
    }
    // Remaining slots become transitions with probability `branching`.
    for (int64_t s = 0; s < slots; ++s) {
        if (used[s] || !rng.coin(params.branching)) continue;
        int state = static_cast<int>(s / params.alphabet_size);
        int event = static_cast<int>(s % params.alphabet_size);
        int target = static_cast<int>(rng.uniform_index(params.n_states));
        model.transitions[{state, event}] = Transition{target, draw_blocks()};
    }
    return model;
}

namespace {

using nlohmann::json;

template <typename T>
T get_field(const json& j, const char* name) {
    if (!j.contains(name))
        throw ParseError(std::string("model: missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("model: field '") + name + "' has the wrong type");
    }
}

}  // namespace

std::string model_to_json(const AppModel& model) {
    json j;
    j["alphabet_size"] = model.alphabet_size;
    j["initial_state"] = model.initial_state;
    j["states"] = model.states;
    j["total_blocks"] = model.total_blocks;
    json transitions = json::array();
    for (const auto& [key, tr] : model.transitions) {
        json t;
        t["from"] = key.first;
        t["event"] = key.second;
        t["to"] = tr.to;
        t["blocks"] = tr.blocks;
        transitions.push_back(std::move(t));
    }
    j["transitions"] = std::move(transitions);
    json rules = json::array();
    for (const auto& [key, sig] : model.crash_rules) {
        json r;
        r["state"] = key.first;
        r["event"] = key.second;
        r["signature"] = sig;
        rules.push_back(std::move(r));
    }
    j["crash_rules"] = std::move(rules);
    return j.dump(2) + "\n";
}

AppModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("model: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("model: top-level value must be an object");
    AppModel model;
    model.alphabet_size = get_field<int>(j, "alphabet_size");
    model.initial_state = get_field<int>(j, "initial_state");
    model.states = get_field<std::vector<int>>(j, "states");
    model.total_blocks = get_field<int>(j, "total_blocks");
    json transitions = get_field<json>(j, "transitions");
    if (!transitions.is_array()) throw ParseError("model: field 'transitions' must be an array");
    for (const json& t : transitions) {
        int from = get_field<int>(t, "from");
        int event = get_field<int>(t, "event");
        Transition tr;
        tr.to = get_field<int>(t, "to");
        tr.blocks = get_field<std::vector<int>>(t, "blocks");
        if (!model.transitions.emplace(std::make_pair(from, event), std::move(tr)).second)
            throw ParseError("model: transitions contains a duplicate (from, event) key");
    }
    json rules = get_field<json>(j, "crash_rules");
    if (!rules.is_array()) throw ParseError("model: field 'crash_rules' must be an array");
    for (const json& r : rules) {
        int state = get_field<int>(r, "state");
        int event = get_field<int>(r, "event");
        int signature = get_field<int>(r, "signature");
        if (!model.crash_rules.emplace(std::make_pair(state, event), signature).second)
            throw ParseError("model: crash_rules contains a duplicate (state, event) key");
    }
    validate(model);
    return model;
}

void save_model(const AppModel& model, const std::string& path) {
    write_file_atomic(path, model_to_json(model));
}

AppModel load_model(const std::string& path) {
    return model_from_json(read_file(path));
}

}  // namespace divgen
