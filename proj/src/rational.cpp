#include "asnp/rational.hpp"

namespace asnp {

mpq_class rat_parse(const std::string& s) {
    require(!s.empty(), "rat_parse: empty string");
    mpq_class q;
    int rc = q.set_str(s, 10);
    require(rc == 0, "rat_parse: bad rational '" + s + "'");
    q.canonicalize();
    require(q.get_den() > 0, "rat_parse: zero denominator in '" + s + "'");
    return q;
}

}  // namespace asnp
