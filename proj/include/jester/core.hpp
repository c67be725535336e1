#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jester/errors.hpp"

namespace jester {

enum class DatasetTag { D1, D2, D3, DX };

// The fictional entity on whose behalf the attack template phrases the request.
enum class Subject { Man, Chicken, FirstPerson, Goat };

// How the subject clause introduces the request.
enum class Phrasing { NeedsHelp, ToldTo };

enum class AttackVariant { DirectInjection, Humor, Ablation, KnockKnock, JokePrefixed };

enum class JokeKind {
    ManNoHumor,
    ManHumor,
    ManNoHumorNoNeg,
    ManHumorNoNeg,
    FixedChicken,
    FixedMark,
    FixedGoat,
};

std::string to_string(DatasetTag tag);
std::string to_string(Subject subject);
std::string to_string(Phrasing phrasing);
std::string to_string(AttackVariant variant);
std::string to_string(JokeKind kind);

DatasetTag dataset_tag_from_string(std::string_view s);
Subject subject_from_string(std::string_view s);
Phrasing phrasing_from_string(std::string_view s);
AttackVariant attack_variant_from_string(std::string_view s);
JokeKind joke_kind_from_string(std::string_view s);

// "Man" / "Chicken" / "I" / "Goat" as the report tables spell them.
std::string subject_label(Subject subject);
// "Man-NoHumor" ... "Chicken" / "Mark" / "Goat".
std::string joke_kind_label(JokeKind kind);

bool joke_kind_is_fixed(JokeKind kind);
// The only subject a joke kind composes with.
Subject joke_kind_subject(JokeKind kind);
// Base kind a *NoNeg kind is stripped from; throws for non-NoNeg kinds.
JokeKind joke_kind_base(JokeKind kind);
bool joke_kind_is_stripped(JokeKind kind);
bool joke_kind_is_humorous(JokeKind kind);

// One dataset record. `text` is carried verbatim through every forging
// operation; whitespace is trimmed once at ingestion.
struct UnsafeRequest {
    std::string id;
    std::string text;
    DatasetTag dataset_tag = DatasetTag::DX;
    std::optional<std::string> category;
    std::optional<Phrasing> phrasing_override;
};

struct AttackSpec {
    AttackVariant variant = AttackVariant::DirectInjection;
    std::optional<Subject> subject;    // absent for DirectInjection
    Phrasing phrasing = Phrasing::NeedsHelp;
    std::optional<JokeKind> joke_kind; // present iff KnockKnock / JokePrefixed

    // Enforces the structural invariants; throws InvalidAttackSpecError or
    // IncompatibleSubjectError.
    void validate() const;

    bool needs_joke() const;
    bool needs_generated_joke() const;

    // Canonical machine key, e.g. "humor/chicken/needs_help".
    std::string key() const;
    // Table row label, e.g. "Chicken" or "KnockKnock-Man-Humor".
    std::string label() const;
};

struct PromptSequence {
    std::vector<std::string> turns;

    std::size_t size() const { return turns.size(); }
    const std::string& final_turn() const { return turns.back(); }
};

// Canonical row ordering for report tables; unknown labels sort last.
int attack_row_rank(const std::string& label);

}  // namespace jester
