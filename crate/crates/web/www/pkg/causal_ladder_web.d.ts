/* tslint:disable */
/* eslint-disable */

/**
 * Exact `d_Int` between the INT1 oracles of two bipartite graphs given as masks.
 */
export function bipartite_distance(m: number, mask_a: number, mask_b: number): string;

/**
 * Exact parent-set counts against the closed-form bound for `d = 1..n-1`.
 */
export function degree_bound_rows(n: number): string;

/**
 * `P(X_j = 1)` for every `j`, observationally (`var < 0`) or under `do(X_var = value)`.
 */
export function marginals(param_json: string, _var: number, value: boolean): string;

/**
 * Canonical oracle bytes for a hidden-parameter JSON document.
 */
export function oracle_text(param_json: string, kind: string): string;

/**
 * Expected absolute error of a constant per-query predictor `p̂ = k/steps`, `k = 0..=steps`.
 */
export function per_query_error_curve(steps: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bipartite_distance: (a: number, b: number, c: number) => [number, number, number, number];
    readonly degree_bound_rows: (a: number) => [number, number, number, number];
    readonly marginals: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly oracle_text: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly per_query_error_curve: (a: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
