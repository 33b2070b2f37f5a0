#include "cak/cli.hpp"

#include "cak/agreement.hpp"
#include "cak/compose.hpp"
#include "cak/document.hpp"
#include "cak/dsl.hpp"
#include "cak/error.hpp"
#include "cak/language.hpp"
#include "cak/logic.hpp"
#include "cak/weak.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <sstream>

namespace cak {

namespace {

using ojson = nlohmann::ordered_json;

ojson gamma_json(const Rational& g)
{
    ojson j;
    j["exact"] = to_string(g);
    j["decimal"] = to_decimal(g);
    return j;
}

ojson principal_json(const ContractAutomaton& a, std::size_t i)
{
    ojson j;
    j["index"] = i + 1;
    j["name"] = a.principal_names()[i];
    return j;
}

ojson transition_json(const ContractAutomaton& a, const Transition& t)
{
    ojson j;
    j["from"] = a.state(t.source);
    j["label"] = t.label.to_string();
    j["to"] = a.state(t.target);
    return j;
}

bool scalar_array(const ojson& j)
{
    for (const auto& e : j)
        if (e.is_structured())
            return false;
    return true;
}

std::string scalar_text(const ojson& j)
{
    return j.is_string() ? j.get<std::string>() : j.dump();
}

void render_text(const ojson& j, std::ostream& out, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& v = it.value();
        if (!v.is_structured()) {
            out << pad << it.key() << ": " << scalar_text(v) << "\n";
        } else if (v.is_array() && scalar_array(v)) {
            out << pad << it.key() << ":";
            if (v.empty())
                out << " (none)";
            for (const auto& e : v)
                out << " " << scalar_text(e);
            out << "\n";
        } else if (v.is_object()) {
            out << pad << it.key() << ":\n";
            render_text(v, out, indent + 2);
        } else {
            out << pad << it.key() << ":" << (v.empty() ? " (none)" : "") << "\n";
            for (const auto& e : v) {
                if (e.is_object()) {
                    out << pad << "  -\n";
                    render_text(e, out, indent + 4);
                } else if (e.is_array() && scalar_array(e)) {
                    out << pad << "  -";
                    for (const auto& x : e)
                        out << " " << scalar_text(x);
                    out << "\n";
                } else {
                    out << pad << "  - " << e.dump() << "\n";
                }
            }
        }
    }
}

void require_nonempty_language(const ContractAutomaton& a)
{
    if (!coreachable_states(a)[a.initial()])
        throw Error(ErrorKind::EmptyLanguage, "the automaton accepts no trace");
}

ojson verdict_json(const std::string& op, const WeakVerdict& v)
{
    ojson r;
    r["operation"] = op;
    r["answer"] = v.answer;
    if (v.gamma)
        r["gamma"] = gamma_json(*v.gamma);
    else
        r["gamma"] = nullptr;
    if (v.action)
        r["action"] = *v.action;
    r["cap"] = v.cap;
    r["witness"] = v.witness_trace ? trace_to_json(*v.witness_trace) : ojson(nullptr);
    if (v.normalized) {
        ojson flow = ojson::array();
        for (std::size_t k = 0; k < v.witness_flow.size(); ++k)
            if (v.witness_flow[k]) {
                auto t = transition_json(*v.normalized, v.normalized->transitions()[k]);
                t["count"] = v.witness_flow[k];
                flow.push_back(std::move(t));
            }
        r["flow"] = std::move(flow);
    }
    return r;
}

ojson liability_json(const ContractAutomaton& a, const LiabilityReport& rep)
{
    ojson list = ojson::array();
    for (auto i : rep.liable) {
        auto j = principal_json(a, i);
        const auto& w = rep.witnesses.at(i);
        j["prefix"] = trace_to_json(w.prefix);
        j["step"] = transition_json(a, w.offending);
        list.push_back(std::move(j));
    }
    return list;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Contract automata toolkit: composition, controller synthesis, (weak) agreement and liability."};
    app.require_subcommand(1);
    app.fallthrough();
    bool json = false;
    app.add_flag("--json", json, "Emit the report as JSON");

    std::vector<std::string> files;
    std::string file, op, output, property, formula, gamma_text, z_text, mode;
    std::size_t index = 0, max_len = 0, cap = 0;
    bool dot = false;

    auto* compose_cmd = app.add_subcommand("compose", "Compose automata");
    compose_cmd->add_option("--op", op, "product or aproduct")->required()->check(CLI::IsMember({"product", "aproduct"}));
    compose_cmd->add_option("files", files, "Automaton files")->required();
    compose_cmd->add_option("-o,--output", output, "Write the result document to a file");
    compose_cmd->add_flag("--dot", dot, "Print a Graphviz description");

    auto* project_cmd = app.add_subcommand("project", "Project onto one principal");
    project_cmd->add_option("-i", index, "Principal index (1-based)")->required();
    project_cmd->add_option("file", file)->required();
    project_cmd->add_option("-o,--output", output, "Write the result document to a file");
    project_cmd->add_flag("--dot", dot, "Print a Graphviz description");

    auto* mpc_cmd = app.add_subcommand("mpc", "Most permissive controller");
    mpc_cmd->add_option("file", file)->required();
    mpc_cmd->add_option("-o,--output", output, "Write the controller document to a file");
    mpc_cmd->add_flag("--dot", dot, "Print a Graphviz description");

    auto* check_cmd = app.add_subcommand("check", "Decide a property");
    check_cmd->add_option("property", property)->required()->check(
        CLI::IsMember({"agreement", "safety", "weak-safety", "weak-agreement"}));
    check_cmd->add_option("file", file)->required();
    check_cmd->add_option("--cap", cap, "Per-transition flow cap");

    auto* liable_cmd = app.add_subcommand("liable", "Liable principals");
    liable_cmd->add_option("file", file)->required();

    auto* weak_liable_cmd = app.add_subcommand("weak-liable", "Weakly liable principals");
    weak_liable_cmd->add_option("file", file)->required();
    weak_liable_cmd->add_option("--cap", cap, "Per-transition flow cap");

    auto* pcl_cmd = app.add_subcommand("pcl", "Horn PCL entailment");
    pcl_cmd->add_option("mode", mode)->required()->check(CLI::IsMember({"entails", "weak-entails"}));
    pcl_cmd->add_option("formula", formula)->required();

    auto* ill_cmd = app.add_subcommand("ill", "Horn ILL with Mix");
    ill_cmd->add_option("mode", mode)->required()->check(CLI::IsMember({"honoured"}));
    ill_cmd->add_option("gamma", gamma_text)->required();
    ill_cmd->add_option("z", z_text);

    auto* traces_cmd = app.add_subcommand("traces", "Enumerate accepted traces");
    traces_cmd->add_option("--max-len", max_len)->required();
    traces_cmd->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? exit_holds : exit_input_error;
    }

    WeakOptions wopts;
    if (cap)
        wopts.cap = cap;

    ojson report;
    int code = exit_holds;
    std::optional<std::string> raw;
    auto emit_automaton = [&](const ContractAutomaton& a, const char* key) {
        if (!output.empty())
            save_automaton(a, output);
        if (dot)
            raw = render_dot(a);
        else
            report[key] = automaton_to_json(a);
    };

    try {
        if (*compose_cmd) {
            std::vector<ContractAutomaton> parts;
            for (const auto& f : files)
                parts.push_back(load_automaton_or_expression(f));
            auto r = op == "product" ? product(parts) : a_product(parts);
            report["operation"] = "compose";
            report["op"] = op;
            emit_automaton(r, "automaton");
        } else if (*project_cmd) {
            auto a = load_automaton_or_expression(file);
            if (index == 0)
                throw Error(ErrorKind::IndexOutOfRange, "principal indices start at 1");
            auto r = projection(a, index - 1);
            report["operation"] = "project";
            report["index"] = index;
            emit_automaton(r, "automaton");
        } else if (*mpc_cmd) {
            auto a = load_automaton_or_expression(file);
            auto m = mpc(a);
            bool admits = !m.controller.finals().empty();
            report["operation"] = "mpc";
            report["answer"] = admits;
            ojson hanged = ojson::array();
            for (const auto& q : m.hanged)
                hanged.push_back(q);
            report["hanged"] = std::move(hanged);
            ojson removed = ojson::array();
            for (const auto& t : m.removed_requests)
                removed.push_back(transition_json(a, t));
            report["removed_requests"] = std::move(removed);
            emit_automaton(m.controller, "controller");
            code = admits ? exit_holds : exit_fails;
        } else if (*check_cmd) {
            auto a = load_automaton_or_expression(file);
            require_nonempty_language(a);
            if (property == "agreement") {
                auto w = agreement_witness(a);
                report["operation"] = "check agreement";
                report["answer"] = w.has_value();
                report["witness"] = w ? trace_to_json(*w) : ojson(nullptr);
                code = w ? exit_holds : exit_fails;
            } else if (property == "safety") {
                bool safe = is_safe(a);
                report["operation"] = "check safety";
                report["answer"] = safe;
                report["liable"] = liability_json(a, liable(a));
                code = safe ? exit_holds : exit_fails;
            } else {
                auto v = property == "weak-safety" ? is_weakly_safe(a, wopts) : admits_weak_agreement(a, wopts);
                report = verdict_json("check " + property, v);
                code = v.answer ? exit_holds : exit_fails;
            }
        } else if (*liable_cmd) {
            auto a = load_automaton_or_expression(file);
            auto rep = liable(a);
            report["operation"] = "liable";
            report["answer"] = rep.liable.empty();
            report["liable"] = liability_json(a, rep);
            ojson alt = ojson::array();
            for (auto i : liable_by_state_exclusion(a))
                alt.push_back(i + 1);
            report["liable_by_state_exclusion"] = std::move(alt);
            code = rep.liable.empty() ? exit_holds : exit_fails;
        } else if (*weak_liable_cmd) {
            auto a = load_automaton_or_expression(file);
            auto rep = weakly_liable(a, wopts);
            report["operation"] = "weak-liable";
            report["answer"] = rep.liable.empty();
            report["cap"] = rep.cap;
            ojson principals = ojson::array();
            for (auto i : rep.liable)
                principals.push_back(principal_json(a, i));
            report["weakly_liable"] = std::move(principals);
            ojson flagged = ojson::array();
            for (const auto& e : rep.flagged) {
                auto j = transition_json(a, e.transition);
                j["gamma"] = gamma_json(e.gamma);
                j["prefix"] = trace_to_json(e.prefix);
                flagged.push_back(std::move(j));
            }
            report["flagged"] = std::move(flagged);
            code = rep.liable.empty() ? exit_holds : exit_fails;
        } else if (*pcl_cmd) {
            auto p = parse_pcl(formula);
            auto e = mode == "entails" ? pcl_entails_lambda(p) : pcl_weak_entails(p);
            report["operation"] = "pcl " + mode;
            report["formula"] = print(p);
            report["lambda"] = lambda(p);
            report["answer"] = e.holds;
            report["witness"] = e.witness ? trace_to_json(*e.witness) : ojson(nullptr);
            code = e.holds ? exit_holds : exit_fails;
        } else if (*ill_cmd) {
            auto g = parse_ill_context(gamma_text);
            auto z = parse_ill_literals(z_text);
            auto e = ill_honoured(g, z);
            report["operation"] = "ill honoured";
            report["gamma"] = print(g);
            ojson zj = ojson::array();
            for (const auto& l : z)
                zj.push_back(l.atom);
            report["z"] = std::move(zj);
            report["answer"] = e.holds;
            report["witness"] = e.witness ? trace_to_json(*e.witness) : ojson(nullptr);
            code = e.holds ? exit_holds : exit_fails;
        } else if (*traces_cmd) {
            auto a = load_automaton_or_expression(file);
            auto ts = enumerate_traces(a, max_len);
            report["operation"] = "traces";
            report["max_len"] = max_len;
            report["count"] = ts.size();
            ojson list = ojson::array();
            for (const auto& w : ts)
                list.push_back(trace_to_json(w));
            report["traces"] = std::move(list);
        }
    } catch (const Error& e) {
        err << "error: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
        return e.kind() == ErrorKind::CapExceeded ? exit_cap_exceeded : exit_input_error;
    }

    if (raw)
        out << *raw;
    else if (json)
        out << report.dump(2) << "\n";
    else
        render_text(report, out, 0);
    return code;
}

}  // namespace cak
