#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cak {

/// Reserved action name used by normalization; not accepted from user input.
inline constexpr std::string_view done_action = "__done";

/// True for identifiers matching [A-Za-z_][A-Za-z0-9_]*.
bool is_valid_action_name(std::string_view name) noexcept;

enum class ActionKind : std::uint8_t { Idle, Request, Offer };

/// One entry of an action vector: ?a, !a or the idle action.
struct BasicAction {
    ActionKind kind = ActionKind::Idle;
    std::string name;

    static BasicAction idle() { return {}; }
    static BasicAction request(std::string n) { return {ActionKind::Request, std::move(n)}; }
    static BasicAction offer(std::string n) { return {ActionKind::Offer, std::move(n)}; }

    bool is_idle() const noexcept { return kind == ActionKind::Idle; }
    bool is_request() const noexcept { return kind == ActionKind::Request; }
    bool is_offer() const noexcept { return kind == ActionKind::Offer; }

    /// The involution co(): swaps request and offer, keeps idle.
    BasicAction co() const;

    /// "?a", "!a" or "-".
    std::string to_string() const;
    /// Inverse of to_string(); throws SyntaxError.
    static BasicAction parse(std::string_view text);

    auto operator<=>(const BasicAction&) const = default;
    bool operator==(const BasicAction&) const = default;
};

enum class LabelKind : std::uint8_t { Request, Offer, Match };

/// A transition label: a request, an offer, or a match, padded with idle entries.
class ActionVector {
public:
    ActionVector() = default;
    /// Validates and classifies; throws MalformedAutomaton on an invalid vector.
    explicit ActionVector(std::vector<BasicAction> entries);

    static ActionVector request(std::size_t rank, std::size_t index, const std::string& name);
    static ActionVector offer(std::size_t rank, std::size_t index, const std::string& name);
    /// Match on name: the offer at offer_index, the request at request_index.
    static ActionVector match(std::size_t rank, std::size_t offer_index, std::size_t request_index,
                              const std::string& name);

    std::size_t rank() const noexcept { return entries_.size(); }
    const BasicAction& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<BasicAction>& entries() const noexcept { return entries_; }

    LabelKind kind() const noexcept { return kind_; }
    bool is_request() const noexcept { return kind_ == LabelKind::Request; }
    bool is_offer() const noexcept { return kind_ == LabelKind::Offer; }
    bool is_match() const noexcept { return kind_ == LabelKind::Match; }
    /// The single name the label is about.
    const std::string& name() const noexcept { return entries_[first_].name; }

    /// Indices of non-idle entries (one or two).
    std::vector<std::size_t> active() const;
    bool is_active(std::size_t i) const { return !entries_[i].is_idle(); }

    /// The label placed at offset `before` inside a vector of rank before+rank()+after.
    ActionVector padded(std::size_t before, std::size_t after) const;

    std::string to_string() const;

    auto operator<=>(const ActionVector& o) const { return entries_ <=> o.entries_; }
    bool operator==(const ActionVector& o) const { return entries_ == o.entries_; }

private:
    std::vector<BasicAction> entries_;
    LabelKind kind_ = LabelKind::Request;
    std::size_t first_ = 0;
};

/// a ⋈ b: a is a lone request/offer on some name and b the lone co-action on it.
bool complementary(const ActionVector& a, const ActionVector& b) noexcept;

using Trace = std::vector<ActionVector>;

struct Observation {
    enum class Kind : std::uint8_t { Request, Offer, Tau } kind;
    std::string name;
    bool operator==(const Observation&) const = default;
};

/// Obs(w): the lone request/offer of each step, or tau for a match.
std::vector<Observation> observable(const Trace& w);

/// Common rank of a trace; nullopt for the empty trace. Throws RankMismatch on mixed ranks.
std::optional<std::size_t> trace_rank(const Trace& w);

std::string to_string(const Trace& w);
std::string to_string(const Observation& o);

}  // namespace cak
