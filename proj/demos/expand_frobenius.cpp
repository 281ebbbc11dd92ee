// Expand the Frobenius x -> x^q on F_q[[T]] in the hyperdifferential basis
// and print the nonzero coefficients: a_(q^j) = (T^q - T)^j.

#include <iostream>

#include "digitbasis/digitbasis.hpp"

using namespace digitbasis;

int main() {
    int q = 3;
    auto fam = local_hyperdiff_family(q);
    const LocalField* L = fam.field;

    auto cert = certify(fam, 3);
    std::cout << "certify(" << fam.label << ", level 3): "
              << (cert.pass ? "pass" : "fail") << "\n";

    auto table = FunctionTable::tabulate(L, 3, 5, [&](const LocalElem& x) {
        return x.pow(q).truncate(5);
    });
    auto ex = expand(table, fam);
    std::cout << "expansion of x -> x^" << q << " (coefficients mod T^" << ex.precN << "):\n";
    for (size_t i = 0; i < ex.coeffs.size(); ++i)
        if (!ex.coeffs[i].truncate(ex.precN).is_zero_at_precision())
            std::cout << "  a_" << i << " = " << ex.coeffs[i].to_string() << "\n";
    return cert.pass ? 0 : 1;
}
