export const marker = 'src/app/core/http.interceptor.ts';
