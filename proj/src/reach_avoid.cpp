#include "rmdp/reach_avoid.hpp"

#include <algorithm>

namespace rmdp {

std::vector<Terminal> classify_states(const std::vector<LabelSet>& labels, const std::vector<std::string>& alphabet,
                                      const ReachAvoidSpec& spec) {
    const auto find = [&](const std::string& name) {
        const auto it = std::find(alphabet.begin(), alphabet.end(), name);
        if (it == alphabet.end()) throw DomainError("label '" + name + "' is not in the alphabet");
        return static_cast<int>(it - alphabet.begin());
    };
    const int g = find(spec.goal);
    const int u = find(spec.unsafe);
    std::vector<Terminal> out(labels.size(), Terminal::none);
    for (std::size_t x = 0; x < labels.size(); ++x) {
        if (labels[x].has(u))
            out[x] = Terminal::unsafe;
        else if (labels[x].has(g))
            out[x] = Terminal::goal;
    }
    return out;
}

}  // namespace rmdp
