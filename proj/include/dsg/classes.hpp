#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsg {

using ClassId = std::uint16_t;

enum class ClassKind : std::uint8_t { place, object };

struct SemanticClass {
    std::string label;
    ClassKind kind = ClassKind::place;
};

/// Declared set of semantic classes. Place and object labels share one
/// namespace, so a label can never belong to both sets.
class ClassRegistry {
public:
    ClassRegistry() = default;

    /// sidewalk, work, education, leisure, housing, retail / car, bicycle, trashcan
    static ClassRegistry urban_default();

    /// Throws DuplicateId if the label is already declared.
    ClassId add(std::string label, ClassKind kind);

    std::optional<ClassId> find(std::string_view label) const;
    ClassId at(std::string_view label) const; // throws UnknownId

    const SemanticClass& operator[](ClassId id) const { return classes_.at(id); }
    std::size_t size() const noexcept { return classes_.size(); }
    bool is_object(ClassId id) const { return classes_.at(id).kind == ClassKind::object; }
    bool is_place(ClassId id) const { return classes_.at(id).kind == ClassKind::place; }

    std::vector<ClassId> object_classes() const;
    std::vector<ClassId> place_classes() const;

    friend bool operator==(const ClassRegistry& a, const ClassRegistry& b);

private:
    std::vector<SemanticClass> classes_;
};

} // namespace dsg
