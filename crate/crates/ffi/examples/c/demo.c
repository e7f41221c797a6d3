/* Build: cargo build -p igusa-ffi
 *        cc demo.c -I../../include -L../../../../target/debug -ligusa_ffi -lm -lpthread -ldl -o demo */
#include <stdio.h>
#include "igusa.h"

int main(int argc, char **argv) {
    const char *text = argc > 1 ? argv[1] : "x^2*y^2+x^5+y^5";
    IgusaPolynomial *f = NULL;
    if (igusa_polynomial_parse(text, NULL, &f) != IGUSA_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", igusa_last_error());
        return 1;
    }
    char *json = NULL;
    IgusaStatus st = igusa_zeta_json(f, 7, 1, 1, &json);
    if (st != IGUSA_STATUS_OK) {
        fprintf(stderr, "zeta (status %d): %s\n", (int)st, igusa_last_error());
        igusa_polynomial_free(f);
        return 1;
    }
    printf("%s\n", json);
    igusa_string_free(json);
    igusa_polynomial_free(f);
    return 0;
}
