#include "jester/core.hpp"

#include <array>
#include <algorithm>

namespace jester {

std::string to_string(DatasetTag tag) {
    switch (tag) {
        case DatasetTag::D1: return "D1";
        case DatasetTag::D2: return "D2";
        case DatasetTag::D3: return "D3";
        case DatasetTag::DX: return "DX";
    }
    return "DX";
}

std::string to_string(Subject subject) {
    switch (subject) {
        case Subject::Man: return "man";
        case Subject::Chicken: return "chicken";
        case Subject::FirstPerson: return "first_person";
        case Subject::Goat: return "goat";
    }
    return "man";
}

std::string to_string(Phrasing phrasing) {
    return phrasing == Phrasing::NeedsHelp ? "needs_help" : "told_to";
}

std::string to_string(AttackVariant variant) {
    switch (variant) {
        case AttackVariant::DirectInjection: return "direct_injection";
        case AttackVariant::Humor: return "humor";
        case AttackVariant::Ablation: return "ablation";
        case AttackVariant::KnockKnock: return "knock_knock";
        case AttackVariant::JokePrefixed: return "joke_prefixed";
    }
    return "direct_injection";
}

std::string to_string(JokeKind kind) {
    switch (kind) {
        case JokeKind::ManNoHumor: return "man_no_humor";
        case JokeKind::ManHumor: return "man_humor";
        case JokeKind::ManNoHumorNoNeg: return "man_no_humor_no_neg";
        case JokeKind::ManHumorNoNeg: return "man_humor_no_neg";
        case JokeKind::FixedChicken: return "fixed_chicken";
        case JokeKind::FixedMark: return "fixed_mark";
        case JokeKind::FixedGoat: return "fixed_goat";
    }
    return "man_no_humor";
}

DatasetTag dataset_tag_from_string(std::string_view s) {
    if (s == "D1") return DatasetTag::D1;
    if (s == "D2") return DatasetTag::D2;
    if (s == "D3") return DatasetTag::D3;
    if (s == "DX") return DatasetTag::DX;
    throw ParseError("unknown dataset tag: " + std::string(s));
}

Subject subject_from_string(std::string_view s) {
    if (s == "man") return Subject::Man;
    if (s == "chicken") return Subject::Chicken;
    if (s == "first_person" || s == "i") return Subject::FirstPerson;
    if (s == "goat") return Subject::Goat;
    throw ParseError("unknown subject: " + std::string(s));
}

Phrasing phrasing_from_string(std::string_view s) {
    if (s == "needs_help") return Phrasing::NeedsHelp;
    if (s == "told_to") return Phrasing::ToldTo;
    throw ParseError("unknown phrasing: " + std::string(s));
}

AttackVariant attack_variant_from_string(std::string_view s) {
    if (s == "direct_injection" || s == "direct") return AttackVariant::DirectInjection;
    if (s == "humor") return AttackVariant::Humor;
    if (s == "ablation") return AttackVariant::Ablation;
    if (s == "knock_knock") return AttackVariant::KnockKnock;
    if (s == "joke_prefixed") return AttackVariant::JokePrefixed;
    throw ParseError("unknown attack variant: " + std::string(s));
}

JokeKind joke_kind_from_string(std::string_view s) {
    if (s == "man_no_humor") return JokeKind::ManNoHumor;
    if (s == "man_humor") return JokeKind::ManHumor;
    if (s == "man_no_humor_no_neg") return JokeKind::ManNoHumorNoNeg;
    if (s == "man_humor_no_neg") return JokeKind::ManHumorNoNeg;
    if (s == "fixed_chicken") return JokeKind::FixedChicken;
    if (s == "fixed_mark") return JokeKind::FixedMark;
    if (s == "fixed_goat") return JokeKind::FixedGoat;
    throw ParseError("unknown joke kind: " + std::string(s));
}

std::string subject_label(Subject subject) {
    switch (subject) {
        case Subject::Man: return "Man";
        case Subject::Chicken: return "Chicken";
        case Subject::FirstPerson: return "I";
        case Subject::Goat: return "Goat";
    }
    return "Man";
}

std::string joke_kind_label(JokeKind kind) {
    switch (kind) {
        case JokeKind::ManNoHumor: return "Man-NoHumor";
        case JokeKind::ManHumor: return "Man-Humor";
        case JokeKind::ManNoHumorNoNeg: return "Man-NoHumor-NoNeg";
        case JokeKind::ManHumorNoNeg: return "Man-Humor-NoNeg";
        case JokeKind::FixedChicken: return "Chicken";
        case JokeKind::FixedMark: return "Mark";
        case JokeKind::FixedGoat: return "Goat";
    }
    return "Man-NoHumor";
}

bool joke_kind_is_fixed(JokeKind kind) {
    return kind == JokeKind::FixedChicken || kind == JokeKind::FixedMark ||
           kind == JokeKind::FixedGoat;
}

Subject joke_kind_subject(JokeKind kind) {
    switch (kind) {
        case JokeKind::ManNoHumor:
        case JokeKind::ManHumor:
        case JokeKind::ManNoHumorNoNeg:
        case JokeKind::ManHumorNoNeg:
            return Subject::Man;
        case JokeKind::FixedChicken: return Subject::Chicken;
        case JokeKind::FixedMark: return Subject::FirstPerson;
        case JokeKind::FixedGoat: return Subject::Goat;
    }
    return Subject::Man;
}

JokeKind joke_kind_base(JokeKind kind) {
    switch (kind) {
        case JokeKind::ManNoHumorNoNeg: return JokeKind::ManNoHumor;
        case JokeKind::ManHumorNoNeg: return JokeKind::ManHumor;
        default:
            throw Error("joke kind has no base: " + to_string(kind));
    }
}

bool joke_kind_is_stripped(JokeKind kind) {
    return kind == JokeKind::ManNoHumorNoNeg || kind == JokeKind::ManHumorNoNeg;
}

bool joke_kind_is_humorous(JokeKind kind) {
    return kind == JokeKind::ManHumor || kind == JokeKind::ManHumorNoNeg;
}

void AttackSpec::validate() const {
    const bool joke_variant =
        variant == AttackVariant::KnockKnock || variant == AttackVariant::JokePrefixed;

    if (variant == AttackVariant::DirectInjection) {
        if (subject.has_value())
            throw InvalidAttackSpecError("direct_injection takes no subject");
    } else if (!subject.has_value()) {
        throw InvalidAttackSpecError("attack variant " + to_string(variant) +
                                     " requires a subject");
    }

    if (joke_variant != joke_kind.has_value()) {
        throw InvalidAttackSpecError(
            joke_variant ? "attack variant " + to_string(variant) + " requires a joke_kind"
                         : "joke_kind is only valid for knock_knock / joke_prefixed");
    }

    if (joke_kind.has_value() && joke_kind_subject(*joke_kind) != *subject) {
        throw IncompatibleSubjectError("joke kind " + to_string(*joke_kind) +
                                       " is incompatible with subject " +
                                       to_string(*subject));
    }
}

bool AttackSpec::needs_joke() const {
    return variant == AttackVariant::KnockKnock || variant == AttackVariant::JokePrefixed;
}

bool AttackSpec::needs_generated_joke() const {
    return needs_joke() && joke_kind.has_value() && !joke_kind_is_fixed(*joke_kind);
}

std::string AttackSpec::key() const {
    switch (variant) {
        case AttackVariant::DirectInjection:
            return "direct_injection";
        case AttackVariant::Humor:
        case AttackVariant::Ablation:
            return to_string(variant) + "/" + to_string(*subject) + "/" + to_string(phrasing);
        case AttackVariant::KnockKnock:
        case AttackVariant::JokePrefixed:
            return to_string(variant) + "/" + to_string(*subject) + "/" + to_string(phrasing) +
                   "/" + to_string(*joke_kind);
    }
    return "direct_injection";
}

std::string AttackSpec::label() const {
    switch (variant) {
        case AttackVariant::DirectInjection:
            return "Direct Injection";
        case AttackVariant::Humor:
            return subject_label(*subject);
        case AttackVariant::Ablation:
            return "Ablation-" + subject_label(*subject);
        case AttackVariant::KnockKnock:
            return "KnockKnock-" + joke_kind_label(*joke_kind);
        case AttackVariant::JokePrefixed:
            return "JokePrefixed-" + joke_kind_label(*joke_kind);
    }
    return "Direct Injection";
}

int attack_row_rank(const std::string& label) {
    static const std::array<const char*, 23> order = {
        "Direct Injection",
        "Man", "Chicken", "I", "Goat",
        "Ablation-Man", "Ablation-Chicken", "Ablation-I", "Ablation-Goat",
        "KnockKnock-Man-NoHumor", "KnockKnock-Man-Humor",
        "KnockKnock-Man-NoHumor-NoNeg", "KnockKnock-Man-Humor-NoNeg",
        "KnockKnock-Chicken", "KnockKnock-Mark", "KnockKnock-Goat",
        "JokePrefixed-Man-NoHumor", "JokePrefixed-Man-Humor",
        "JokePrefixed-Man-NoHumor-NoNeg", "JokePrefixed-Man-Humor-NoNeg",
        "JokePrefixed-Chicken", "JokePrefixed-Mark", "JokePrefixed-Goat",
    };
    auto it = std::find_if(order.begin(), order.end(),
                           [&](const char* l) { return label == l; });
    if (it != order.end()) return static_cast<int>(it - order.begin());
    return static_cast<int>(order.size());
}

}  // namespace jester
