#include "cak/action.hpp"

#include "cak/error.hpp"

#include <cctype>

namespace cak {

const char* error_kind_name(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::EmptyComponentList: return "EmptyComponentList";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotPrincipal: return "NotPrincipal";
    case ErrorKind::CyclicLeftOperand: return "CyclicLeftOperand";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::RankTooSmall: return "RankTooSmall";
    case ErrorKind::EmptyLanguage: return "EmptyLanguage";
    case ErrorKind::UnknownState: return "UnknownState";
    case ErrorKind::InfeasibleFlow: return "InfeasibleFlow";
    case ErrorKind::MalformedModel: return "MalformedModel";
    case ErrorKind::MalformedAutomaton: return "MalformedAutomaton";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::InvalidFormula: return "InvalidFormula";
    case ErrorKind::StandardImplicationPresent: return "StandardImplicationPresent";
    case ErrorKind::NegativeAtomInZ: return "NegativeAtomInZ";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::SelfComplementaryPrincipal: return "SelfComplementaryPrincipal";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

bool is_valid_action_name(std::string_view name) noexcept
{
    if (name.empty())
        return false;
    auto c0 = static_cast<unsigned char>(name[0]);
    if (!(std::isalpha(c0) || c0 == '_'))
        return false;
    for (char ch : name) {
        auto c = static_cast<unsigned char>(ch);
        if (!(std::isalnum(c) || c == '_'))
            return false;
    }
    return true;
}

BasicAction BasicAction::co() const
{
    switch (kind) {
    case ActionKind::Request: return offer(name);
    case ActionKind::Offer: return request(name);
    case ActionKind::Idle: break;
    }
    return idle();
}

std::string BasicAction::to_string() const
{
    switch (kind) {
    case ActionKind::Request: return "?" + name;
    case ActionKind::Offer: return "!" + name;
    case ActionKind::Idle: break;
    }
    return "-";
}

BasicAction BasicAction::parse(std::string_view text)
{
    if (text == "-")
        return idle();
    if (text.size() >= 2 && (text[0] == '?' || text[0] == '!')) {
        std::string_view name = text.substr(1);
        if (name == done_action)
            throw Error(ErrorKind::SyntaxError, "the name '" + std::string(name) + "' is reserved", 1);
        if (is_valid_action_name(name))
            return text[0] == '?' ? request(std::string(name)) : offer(std::string(name));
    }
    throw Error(ErrorKind::SyntaxError, "invalid basic action '" + std::string(text) + "'", 0);
}

ActionVector::ActionVector(std::vector<BasicAction> entries) : entries_(std::move(entries))
{
    if (entries_.empty())
        throw Error(ErrorKind::MalformedAutomaton, "action vector of rank 0");
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!e.is_idle()) {
            if (!is_valid_action_name(e.name))
                throw Error(ErrorKind::MalformedAutomaton, "invalid action name '" + e.name + "'");
            act.push_back(i);
        }
    }
    if (act.size() == 1) {
        first_ = act[0];
        kind_ = entries_[first_].is_request() ? LabelKind::Request : LabelKind::Offer;
        return;
    }
    if (act.size() == 2 && entries_[act[0]].co() == entries_[act[1]]) {
        first_ = act[0];
        kind_ = LabelKind::Match;
        return;
    }
    throw Error(ErrorKind::MalformedAutomaton, "invalid action vector " + to_string());
}

ActionVector ActionVector::request(std::size_t rank, std::size_t index, const std::string& name)
{
    std::vector<BasicAction> e(rank);
    e.at(index) = BasicAction::request(name);
    return ActionVector(std::move(e));
}

ActionVector ActionVector::offer(std::size_t rank, std::size_t index, const std::string& name)
{
    std::vector<BasicAction> e(rank);
    e.at(index) = BasicAction::offer(name);
    return ActionVector(std::move(e));
}

ActionVector ActionVector::match(std::size_t rank, std::size_t offer_index, std::size_t request_index,
                                 const std::string& name)
{
    std::vector<BasicAction> e(rank);
    e.at(offer_index) = BasicAction::offer(name);
    e.at(request_index) = BasicAction::request(name);
    return ActionVector(std::move(e));
}

std::vector<std::size_t> ActionVector::active() const
{
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (!entries_[i].is_idle())
            r.push_back(i);
    return r;
}

ActionVector ActionVector::padded(std::size_t before, std::size_t after) const
{
    ActionVector r;
    r.entries_.reserve(before + entries_.size() + after);
    r.entries_.resize(before);
    r.entries_.insert(r.entries_.end(), entries_.begin(), entries_.end());
    r.entries_.resize(before + entries_.size() + after);
    r.kind_ = kind_;
    r.first_ = first_ + before;
    return r;
}

std::string ActionVector::to_string() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i)
            s += ",";
        s += entries_[i].to_string();
    }
    return s + ")";
}

bool complementary(const ActionVector& a, const ActionVector& b) noexcept
{
    if (a.rank() == 0 || b.rank() == 0 || a.is_match() || b.is_match())
        return false;
    return a.is_request() != b.is_request() && a.name() == b.name();
}

std::vector<Observation> observable(const Trace& w)
{
    std::vector<Observation> r;
    r.reserve(w.size());
    for (const auto& a : w) {
        switch (a.kind()) {
        case LabelKind::Request: r.push_back({Observation::Kind::Request, a.name()}); break;
        case LabelKind::Offer: r.push_back({Observation::Kind::Offer, a.name()}); break;
        case LabelKind::Match: r.push_back({Observation::Kind::Tau, {}}); break;
        }
    }
    return r;
}

std::optional<std::size_t> trace_rank(const Trace& w)
{
    if (w.empty())
        return std::nullopt;
    for (const auto& a : w)
        if (a.rank() != w.front().rank())
            throw Error(ErrorKind::RankMismatch, "trace mixes action vectors of different ranks");
    return w.front().rank();
}

std::string to_string(const Trace& w)
{
    if (w.empty())
        return "ε";
    std::string s;
    for (const auto& a : w)
        s += a.to_string();
    return s;
}

std::string to_string(const Observation& o)
{
    switch (o.kind) {
    case Observation::Kind::Request: return "?" + o.name;
    case Observation::Kind::Offer: return "!" + o.name;
    case Observation::Kind::Tau: break;
    }
    return "tau";
}

}  // namespace cak
