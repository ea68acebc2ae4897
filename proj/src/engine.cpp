#include "siq/engine.hpp"

#include "siq/atomese.hpp"
#include "siq/error.hpp"

#include <algorithm>
#include <map>

namespace siq {

namespace {

constexpr std::string_view kFramePrefix = "Frame#";

std::optional<std::string> frame_of(const AtomStore& store, AtomId atom) {
    if (!store.is_node(atom) || !store.is_type(atom, types::ConceptNode)) return std::nullopt;
    const std::string& name = store.name(atom);
    if (!name.starts_with(kFramePrefix)) return std::nullopt;
    return name.substr(kFramePrefix.size());
}

bool boxes_less(const ResultGrounding& a, const ResultGrounding& b) {
    return std::lexicographical_compare(
        a.boxes.begin(), a.boxes.end(), b.boxes.begin(), b.boxes.end(),
        [](const GroundedBox& x, const GroundedBox& y) { return natural_less(x.bb, y.bb); });
}

std::string describe(const oracle::Assignment& a) {
    std::string out = "frame " + a.frame_id + ":";
    for (const std::string& bb : a.boxes) out += " " + bb;
    return out;
}

} // namespace

std::size_t QueryResult::grounding_count() const {
    std::size_t n = 0;
    for (const FrameResult& f : frames) n += f.groundings.size();
    return n;
}

Engine::Engine() : evaluators_(spatial_evaluators()) {}

void Engine::set_params(const RelParams& params) {
    params.validate();
    if (params == params_) return;
    params_ = params;
    replay();
}

void Engine::replay() {
    store_ = AtomStore();
    rules_.reset();
    cache_.clear();
    for (const Input& input : inputs_) {
        if (const auto* set = std::get_if<DetectionSet>(&input))
            build_graph(*set, store_);
        else
            atomese::load(atomese::parse(std::get<std::string>(input)), store_);
    }
}

std::size_t Engine::ingest(const DetectionSet& set) {
    std::size_t added = build_graph(set, store_);
    inputs_.emplace_back(set);
    if (added) cache_.clear();
    return added;
}

std::size_t Engine::ingest_file(const std::filesystem::path& path, std::optional<double> min_confidence) {
    DetectionSet set = read_detections(path);
    if (min_confidence) set = filter_min_confidence(std::move(set), *min_confidence);
    return ingest(set);
}

std::size_t Engine::ingest_jsonl(std::string_view text, std::optional<double> min_confidence) {
    DetectionSet set = parse_detections(text);
    if (min_confidence) set = filter_min_confidence(std::move(set), *min_confidence);
    return ingest(set);
}

std::vector<AtomId> Engine::load_atomese(std::string_view text) {
    atomese::Doc doc = atomese::parse(text);
    const std::size_t before = store_.size();
    std::vector<AtomId> roots = atomese::load(doc, store_);
    inputs_.emplace_back(std::string(text));
    if (store_.size() != before) cache_.clear();
    return roots;
}

std::string Engine::dump() const { return atomese::print(store_); }

const std::vector<BindRule>& Engine::rules() {
    if (!rules_) rules_ = builtin_rules(store_, params_);
    return *rules_;
}

QueryResult Engine::query(std::string_view surface_query) { return query(parse_query(surface_query)); }

QueryResult Engine::query(const QueryAST& ast) {
    const auto& rules = this->rules();
    CompiledQuery compiled = compile_query(ast, store_);
    ExecutionLog log;
    auto groundings = backward_chain(compiled.goal, rules, store_, evaluators_, &log, &cache_);
    return collect(groundings, compiled.slot_variables, std::move(log));
}

QueryResult Engine::query_atomese(std::string_view text) {
    atomese::Doc doc = atomese::parse(text);
    if (doc.roots.empty()) throw Error(ErrorCode::EmptyQuery, "Atomese query has no atoms");
    std::vector<BindRule> rules = this->rules();
    const std::size_t before = store_.size();
    std::vector<AtomId> roots = atomese::load(doc, store_);
    if (store_.size() != before) cache_.clear();

    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        if (store_.is_type(roots[i], types::BindLink))
            rules.push_back(rule_from_bind_link("user-rule-" + std::to_string(i + 1), roots[i], store_));
    }
    AtomId last = roots.back();
    const bool is_bind = store_.is_type(last, types::BindLink);
    std::optional<BindRule> query_rule;
    Pattern goal;
    if (is_bind) {
        query_rule = rule_from_bind_link("query", last, store_);
        goal = query_rule->pattern;
    } else {
        goal = pattern_from_body(store_, last);
    }
    ExecutionLog log;
    auto groundings = backward_chain(goal, rules, store_, evaluators_, &log, nullptr);
    if (query_rule) {
        BindResult r = execute_bind(*query_rule, store_, evaluators_);
        log.push_back({query_rule->name, r.groundings, r.atoms_added, false});
    }
    return collect(groundings, {}, std::move(log));
}

QueryResult Engine::collect(const std::vector<Grounding>& groundings, const std::vector<std::string>& box_order,
                            ExecutionLog log) const {
    struct Less {
        bool operator()(const std::string& a, const std::string& b) const { return natural_less(a, b); }
    };
    std::map<std::string, FrameResult, Less> frames;

    for (const Grounding& g : groundings) {
        std::vector<std::string> order = box_order;
        if (order.empty())
            for (const auto& [name, _] : g.bindings) order.push_back(name);

        std::optional<std::string> frame;
        for (const auto& [name, atom] : g.bindings) {
            if ((frame = frame_of(store_, atom))) break;
        }
        ResultGrounding rg;
        for (const std::string& var : order) {
            AtomId atom = g.at(var);
            if (auto det = decode_bb(store_, atom)) rg.boxes.push_back({var, store_.name(atom), std::move(*det)});
        }
        if (!frame && !rg.boxes.empty()) frame = rg.boxes.front().detection.frame_id;
        if (!frame) throw Error(ErrorCode::InvalidArgument, "query grounding binds no frame or bounding box");

        FrameResult& fr = frames[*frame];
        fr.frame_id = *frame;
        fr.groundings.push_back(std::move(rg));
    }

    QueryResult result;
    result.log = std::move(log);
    for (auto& [id, fr] : frames) {
        std::sort(fr.groundings.begin(), fr.groundings.end(), boxes_less);
        result.frames.push_back(std::move(fr));
    }
    return result;
}

CheckReport Engine::check(const QueryAST& ast) {
    CheckReport report;
    QueryResult result = query(ast);
    for (const FrameResult& f : result.frames) {
        for (const ResultGrounding& g : f.groundings) {
            oracle::Assignment a{f.frame_id, {}};
            for (const GroundedBox& b : g.boxes) a.boxes.push_back(b.bb);
            report.engine.push_back(std::move(a));
        }
    }
    std::sort(report.engine.begin(), report.engine.end());
    DetectionSet dets = detections();
    report.oracle = oracle::retrieve(ast, dets.detections, params_);
    report.agree = report.engine == report.oracle;

    std::vector<oracle::Assignment> missing;
    std::vector<oracle::Assignment> extra;
    std::set_difference(report.oracle.begin(), report.oracle.end(), report.engine.begin(), report.engine.end(),
                        std::back_inserter(missing));
    std::set_difference(report.engine.begin(), report.engine.end(), report.oracle.begin(), report.oracle.end(),
                        std::back_inserter(extra));

    auto frame_count = [](const std::vector<oracle::Assignment>& v) {
        std::vector<std::string> ids;
        for (const auto& a : v)
            if (ids.empty() || ids.back() != a.frame_id) ids.push_back(a.frame_id);
        return ids.size();
    };
    std::string& t = report.text;
    t += "query: " + to_text(ast) + "\n";
    t += "engine: " + std::to_string(frame_count(report.engine)) + " frames, " +
         std::to_string(report.engine.size()) + " assignments\n";
    t += "oracle: " + std::to_string(frame_count(report.oracle)) + " frames, " +
         std::to_string(report.oracle.size()) + " assignments\n";
    for (const auto& a : missing) t += "- " + describe(a) + "\n";
    for (const auto& a : extra) t += "+ " + describe(a) + "\n";
    t += report.agree ? "agree\n" : "DISAGREE\n";
    return report;
}

} // namespace siq
