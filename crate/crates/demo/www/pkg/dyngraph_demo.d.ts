/* tslint:disable */
/* eslint-disable */

/**
 * A live (Δ+1)-coloring driven from the page.
 */
export class ColoringDemo {
    free(): void;
    [Symbol.dispose](): void;
    audit_violations(): number;
    colors(): Uint32Array;
    conflicts(): number;
    delete(u: number, v: number): boolean;
    delta(): number;
    edge_count(): number;
    /**
     * Edge endpoints, two entries per edge.
     */
    edges(): Uint32Array;
    /**
     * Inserts an edge and returns the recoloring path, first vertex first.
     */
    insert(u: number, v: number): Uint32Array;
    n(): number;
    constructor(n: number, delta: number, seed: number);
    recolorings(): number;
    /**
     * Applies one random update. Returns `[kind, u, v, path...]` with kind 1
     * for an insertion and 0 for a deletion, or nothing if no update exists.
     */
    step(insert_bias: number): Uint32Array;
    work(): number;
}

/**
 * Runs the phased component estimator with `Thr` equal to the live count of
 * non-isolated vertices. Returns `[estimate, exact, allowed error]` per update.
 */
export function cc_trace(n: number, eps: number, p: number, updates: number, seed: number): Float64Array;

/**
 * Runs the deterministic MSF estimator over random churn.
 * Returns `[estimate, exact]` per update.
 */
export function msf_trace(n: number, eps: number, max_weight: number, updates: number, seed: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_coloringdemo_free: (a: number, b: number) => void;
    readonly cc_trace: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly coloringdemo_audit_violations: (a: number) => number;
    readonly coloringdemo_colors: (a: number) => [number, number];
    readonly coloringdemo_conflicts: (a: number) => number;
    readonly coloringdemo_delete: (a: number, b: number, c: number) => number;
    readonly coloringdemo_delta: (a: number) => number;
    readonly coloringdemo_edge_count: (a: number) => number;
    readonly coloringdemo_edges: (a: number) => [number, number];
    readonly coloringdemo_insert: (a: number, b: number, c: number) => [number, number, number, number];
    readonly coloringdemo_n: (a: number) => number;
    readonly coloringdemo_new: (a: number, b: number, c: number) => [number, number, number];
    readonly coloringdemo_recolorings: (a: number) => number;
    readonly coloringdemo_step: (a: number, b: number) => [number, number];
    readonly coloringdemo_work: (a: number) => number;
    readonly msf_trace: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
