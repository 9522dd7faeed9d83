#include "gdag/known_graphs.hpp"

namespace gdag::graphs {

namespace {

constexpr auto o = NodeKind::observed;
constexpr auto u = NodeKind::unobserved;

} // namespace

GDag bell()
{
    return GDag({{"X", o}, {"Y", o}, {"A", o}, {"B", o}, {"Λ", u}},
                {{"X", "A"}, {"Λ", "A"}, {"Λ", "B"}, {"Y", "B"}});
}

GDag one_sided_bell()
{
    return GDag({{"X", o}, {"A", o}, {"B", o}, {"Λ", u}}, {{"X", "A"}, {"Λ", "A"}, {"Λ", "B"}});
}

GDag triangle()
{
    return GDag({{"A", o}, {"B", o}, {"C", o}, {"Lab", u}, {"Lbc", u}, {"Lca", u}},
                {{"Lab", "A"}, {"Lab", "B"}, {"Lbc", "B"}, {"Lbc", "C"}, {"Lca", "C"}, {"Lca", "A"}});
}

GDag instrumental()
{
    return GDag({{"Y", o}, {"A", o}, {"B", o}, {"U", u}}, {{"Y", "B"}, {"B", "A"}, {"U", "A"}, {"U", "B"}});
}

GDag separation_example()
{
    return GDag({{"A", o}, {"B", o}, {"C", u}, {"D", o}, {"E", u}, {"F", o}, {"H", u}, {"J", u}},
                {{"H", "E"}, {"E", "A"}, {"E", "B"}, {"E", "C"}, {"D", "A"}, {"F", "B"}, {"J", "F"}, {"J", "C"}});
}

GDag chain()
{
    return GDag({{"X", o}, {"Z", o}, {"Y", o}}, {{"X", "Z"}, {"Z", "Y"}});
}

GDag fork()
{
    return GDag({{"X", o}, {"Z", o}, {"Y", o}}, {{"Z", "X"}, {"Z", "Y"}});
}

GDag collider()
{
    return GDag({{"X", o}, {"Z", o}, {"Y", o}}, {{"X", "Z"}, {"Y", "Z"}});
}

} // namespace gdag::graphs
