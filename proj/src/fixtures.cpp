#include "stratmc/fixtures.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace stratmc {

GameModel fig1_model() {
    GameModelBuilder b(2);
    b.action("a").action("b").action("c");
    b.state("s0", {"q"}).state("s1", {"p", "q"});
    b.legal("s0", 1, {"a", "b"}).legal("s0", 2, {"a", "b"});
    b.legal("s1", 1, {"c"}).legal("s1", 2, {"c"});
    b.trans("s0", {"a", "a"}, "s1").trans("s0", {"b", "b"}, "s1");
    b.trans("s0", {"a", "b"}, "s0").trans("s0", {"b", "a"}, "s0");
    b.trans("s1", {"c", "c"}, "s1");
    return b.build();
}

GameModel fig2_model() {
    GameModelBuilder b(1);
    b.action("w").action("g");
    b.state("s0").state("s1", {"p"}).state("s2");
    for (auto s : {"s0", "s1", "s2"}) b.legal(s, 1, {"w", "g"});
    b.trans("s0", {"w"}, "s0").trans("s0", {"g"}, "s1");
    b.trans("s1", {"w"}, "s2").trans("s1", {"g"}, "s2");
    b.trans("s2", {"w"}, "s2").trans("s2", {"g"}, "s2");
    return b.build();
}

GameModel fig3_family(int k) {
    if (k < 1) throw std::invalid_argument("fig3_family requires k >= 1, got " + std::to_string(k));
    GameModelBuilder b(1);
    b.action("w").action("g");
    std::vector<std::string> chain;
    for (int i = 0; i <= k; ++i) chain.push_back("s" + std::to_string(i));
    for (const auto& s : chain) b.state(s);
    b.state("s_lose").state("s_win", {"p"});
    std::vector<std::string> others(chain.begin() + 1, chain.end());
    others.push_back("s_lose");
    others.push_back("s_win");
    for (const auto& s : chain) b.legal(s, 1, {"w", "g"});
    b.legal("s_lose", 1, {"w", "g"}).legal("s_win", 1, {"w", "g"});
    for (int i = 0; i < k; ++i) {
        b.trans(chain[i], {"w"}, chain[i + 1]);
        b.trans(chain[i], {"g"}, "s_lose");
    }
    b.trans(chain[k], {"w"}, "s_lose").trans(chain[k], {"g"}, "s_win");
    for (auto s : {"s_lose", "s_win"}) {
        b.trans(s, {"w"}, s);
        b.trans(s, {"g"}, s);
    }
    b.obs(1, {{"s0"}, others});
    return b.build();
}

}  // namespace stratmc
