/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_coloringdemo_free: (a: number, b: number) => void;
export const cc_trace: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const coloringdemo_audit_violations: (a: number) => number;
export const coloringdemo_colors: (a: number) => [number, number];
export const coloringdemo_conflicts: (a: number) => number;
export const coloringdemo_delete: (a: number, b: number, c: number) => number;
export const coloringdemo_delta: (a: number) => number;
export const coloringdemo_edge_count: (a: number) => number;
export const coloringdemo_edges: (a: number) => [number, number];
export const coloringdemo_insert: (a: number, b: number, c: number) => [number, number, number, number];
export const coloringdemo_n: (a: number) => number;
export const coloringdemo_new: (a: number, b: number, c: number) => [number, number, number];
export const coloringdemo_recolorings: (a: number) => number;
export const coloringdemo_step: (a: number, b: number) => [number, number];
export const coloringdemo_work: (a: number) => number;
export const msf_trace: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
