#include "dsg/classes.hpp"

#include "dsg/error.hpp"

namespace dsg {

ClassRegistry ClassRegistry::urban_default()
{
    ClassRegistry r;
    for (const char* place : {"sidewalk", "work", "education", "leisure", "housing", "retail"})
        r.add(place, ClassKind::place);
    for (const char* object : {"car", "bicycle", "trashcan"})
        r.add(object, ClassKind::object);
    return r;
}

ClassId ClassRegistry::add(std::string label, ClassKind kind)
{
    if (find(label)) throw DuplicateId("semantic class '" + label + "' declared twice");
    classes_.push_back({std::move(label), kind});
    return static_cast<ClassId>(classes_.size() - 1);
}

std::optional<ClassId> ClassRegistry::find(std::string_view label) const
{
    for (std::size_t i = 0; i < classes_.size(); ++i)
        if (classes_[i].label == label) return static_cast<ClassId>(i);
    return std::nullopt;
}

ClassId ClassRegistry::at(std::string_view label) const
{
    if (auto id = find(label)) return *id;
    throw UnknownId("undeclared semantic class '" + std::string(label) + "'");
}

std::vector<ClassId> ClassRegistry::object_classes() const
{
    std::vector<ClassId> out;
    for (std::size_t i = 0; i < classes_.size(); ++i)
        if (classes_[i].kind == ClassKind::object) out.push_back(static_cast<ClassId>(i));
    return out;
}

std::vector<ClassId> ClassRegistry::place_classes() const
{
    std::vector<ClassId> out;
    for (std::size_t i = 0; i < classes_.size(); ++i)
        if (classes_[i].kind == ClassKind::place) out.push_back(static_cast<ClassId>(i));
    return out;
}

bool operator==(const ClassRegistry& a, const ClassRegistry& b)
{
    if (a.classes_.size() != b.classes_.size()) return false;
    for (std::size_t i = 0; i < a.classes_.size(); ++i)
        if (a.classes_[i].label != b.classes_[i].label || a.classes_[i].kind != b.classes_[i].kind)
            return false;
    return true;
}

} // namespace dsg
