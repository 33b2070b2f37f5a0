#include "cak/document.hpp"

#include "cak/dsl.hpp"
#include "cak/error.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace cak {

namespace {

[[noreturn]] void malformed(const std::string& m)
{
    throw Error(ErrorKind::MalformedAutomaton, m);
}

StateVector state_from_json(const nlohmann::json& j, std::size_t rank)
{
    if (j.is_string() && rank == 1)
        return {j.get<std::string>()};
    if (!j.is_array())
        malformed("a state must be an array of strings");
    StateVector q;
    for (const auto& e : j) {
        if (!e.is_string())
            malformed("a state must be an array of strings");
        q.push_back(e.get<std::string>());
    }
    if (q.size() != rank)
        malformed("state " + to_string(q) + " does not have rank " + std::to_string(rank));
    return q;
}

ActionVector label_from_json(const nlohmann::json& j, std::size_t rank)
{
    std::vector<BasicAction> entries;
    try {
        if (j.is_string() && rank == 1) {
            entries.push_back(BasicAction::parse(j.get<std::string>()));
        } else if (j.is_array()) {
            for (const auto& e : j) {
                if (!e.is_string())
                    malformed("a label entry must be a string");
                entries.push_back(BasicAction::parse(e.get<std::string>()));
            }
        } else {
            malformed("a label must be an array of strings");
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SyntaxError)
            malformed(e.what());
        throw;
    }
    if (entries.size() != rank)
        malformed("label does not have rank " + std::to_string(rank));
    return ActionVector(std::move(entries));
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ContractAutomaton automaton_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object())
        malformed("automaton document must be a JSON object");
    if (!doc.contains("rank") || !doc["rank"].is_number_unsigned() || doc["rank"].get<std::size_t>() == 0)
        malformed("'rank' must be a positive integer");
    const std::size_t rank = doc["rank"].get<std::size_t>();
    for (const char* key : {"initial", "finals", "transitions"})
        if (!doc.contains(key))
            malformed(std::string("missing field '") + key + "'");
    if (!doc["finals"].is_array() || !doc["transitions"].is_array())
        malformed("'finals' and 'transitions' must be arrays");

    std::vector<StateVector> states;
    std::map<StateVector, std::size_t> ids;
    auto intern = [&](const StateVector& q, bool declare) -> std::size_t {
        auto it = ids.find(q);
        if (it != ids.end())
            return it->second;
        if (!declare)
            throw Error(ErrorKind::UnknownState, "undeclared state " + to_string(q));
        ids.emplace(q, states.size());
        states.push_back(q);
        return states.size() - 1;
    };
    const bool declared = doc.contains("states");
    if (declared) {
        if (!doc["states"].is_array())
            malformed("'states' must be an array");
        for (const auto& s : doc["states"]) {
            auto q = state_from_json(s, rank);
            if (ids.count(q))
                malformed("duplicate state " + to_string(q));
            intern(q, true);
        }
    }
    std::size_t initial = intern(state_from_json(doc["initial"], rank), !declared);
    std::vector<Transition> ts;
    for (const auto& t : doc["transitions"]) {
        if (!t.is_object() || !t.contains("from") || !t.contains("label") || !t.contains("to"))
            malformed("a transition needs 'from', 'label' and 'to'");
        auto s = intern(state_from_json(t["from"], rank), !declared);
        auto l = label_from_json(t["label"], rank);
        auto d = intern(state_from_json(t["to"], rank), !declared);
        ts.push_back({s, std::move(l), d});
    }
    std::vector<std::size_t> finals;
    for (const auto& f : doc["finals"])
        finals.push_back(intern(state_from_json(f, rank), !declared));

    std::optional<Alphabet> alpha;
    if (doc.contains("requests") || doc.contains("offers")) {
        Alphabet a;
        auto names = [&](const char* key, std::set<std::string>& into) {
            if (!doc.contains(key))
                return;
            if (!doc[key].is_array())
                malformed(std::string("'") + key + "' must be an array of names");
            for (const auto& n : doc[key]) {
                if (!n.is_string())
                    malformed(std::string("'") + key + "' must be an array of names");
                into.insert(n.get<std::string>());
            }
        };
        names("requests", a.requests);
        names("offers", a.offers);
        alpha = std::move(a);
    }
    std::vector<std::string> pnames;
    if (doc.contains("principal_names")) {
        if (!doc["principal_names"].is_array())
            malformed("'principal_names' must be an array of strings");
        for (const auto& n : doc["principal_names"]) {
            if (!n.is_string())
                malformed("'principal_names' must be an array of strings");
            pnames.push_back(n.get<std::string>());
        }
    }
    return ContractAutomaton(rank, std::move(states), initial, std::move(finals), std::move(ts), std::move(alpha),
                             std::move(pnames));
}

nlohmann::ordered_json automaton_to_json(const ContractAutomaton& a)
{
    nlohmann::ordered_json doc;
    doc["rank"] = a.rank();
    doc["principal_names"] = a.principal_names();
    doc["states"] = nlohmann::ordered_json::array();
    for (const auto& q : a.states())
        doc["states"].push_back(q);
    doc["initial"] = a.state(a.initial());
    doc["finals"] = nlohmann::ordered_json::array();
    for (auto f : a.finals())
        doc["finals"].push_back(a.state(f));
    doc["requests"] = std::vector<std::string>(a.requests().begin(), a.requests().end());
    doc["offers"] = std::vector<std::string>(a.offers().begin(), a.offers().end());
    doc["transitions"] = nlohmann::ordered_json::array();
    for (const auto& t : a.transitions()) {
        nlohmann::ordered_json label = nlohmann::ordered_json::array();
        for (const auto& e : t.label.entries())
            label.push_back(e.to_string());
        nlohmann::ordered_json jt;
        jt["from"] = a.state(t.source);
        jt["label"] = std::move(label);
        jt["to"] = a.state(t.target);
        doc["transitions"].push_back(std::move(jt));
    }
    return doc;
}

ContractAutomaton load_automaton(const std::string& path)
{
    auto text = read_file(path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::SyntaxError, "'" + path + "': " + e.what(), e.byte);
    }
    return automaton_from_json(doc);
}

void save_automaton(const ContractAutomaton& a, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    out << automaton_to_json(a).dump(2) << "\n";
}

ContractAutomaton load_automaton_or_expression(const std::string& path)
{
    auto text = read_file(path);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return load_automaton(path);
    return parse_principal(text);
}

std::string render_dot(const ContractAutomaton& a)
{
    auto quote = [](const std::string& s) {
        std::string r = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\')
                r += '\\';
            r += c;
        }
        return r + "\"";
    };
    std::ostringstream out;
    out << "digraph contract {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (std::size_t q = 0; q < a.num_states(); ++q)
        out << "  n" << q << " [label=" << quote(to_string(a.state(q)))
            << (a.is_final(q) ? ", shape=doublecircle" : ", shape=circle") << "];\n";
    out << "  __start -> n" << a.initial() << ";\n";
    for (const auto& t : a.transitions())
        out << "  n" << t.source << " -> n" << t.target << " [label=" << quote(t.label.to_string()) << "];\n";
    out << "}\n";
    return out.str();
}

nlohmann::ordered_json trace_to_json(const Trace& w)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& a : w)
        j.push_back(a.to_string());
    return j;
}

}  // namespace cak
