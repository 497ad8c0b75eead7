#include <stdio.h>
#include <string.h>
#include "bloch_rspt.h"

int main(void) {
    BlochEngine *engine = bloch_engine_new();
    uint32_t seq[] = {2, 0, 0, 2};
    char *c = NULL, *e = NULL;
    if (bloch_coeff(engine, seq, 4, BLOCH_METHOD_RECURRENCE, &c, &e) != BLOCH_OK) return 1;
    printf("c=%s e=%s\n", c, e);
    bloch_string_free(c);
    bloch_string_free(e);

    const char *json = "{\"dim\":2,\"h0\":[0,1],\"v\":[[0,1],[1,0]],\"target\":0}";
    BlochHamiltonian *h = NULL;
    BlochSeries *s = NULL;
    if (bloch_hamiltonian_from_json(json, &h) != BLOCH_OK) return 2;
    if (bloch_series_new(h, engine, BLOCH_ROUTE_DIAGRAMMATIC, 4, false, &s) != BLOCH_OK) return 3;
    for (size_t n = 0; n <= bloch_series_order(s); n++) {
        double x;
        bloch_series_energy(s, n, &x);
        printf("%g ", x);
    }
    printf("\n");

    uint32_t bad[] = {2, 0, 0};
    int status = bloch_coeff(engine, bad, 3, BLOCH_METHOD_CLOSED, &c, &e);
    printf("%d %s\n", status, bloch_last_error_message());

    bloch_series_free(s);
    bloch_hamiltonian_free(h);
    bloch_engine_free(engine);
    return 0;
}
