import { Injectable } from '@angular/core';
import { HttpClient } from '@angular/common/http';
import { shareReplay } from 'rxjs/operators';

@Injectable({ providedIn: 'root' })
export class FlagsService {
  readonly flags$ = this.http.get<{ beta: boolean }>('/api/flags').pipe(shareReplay(1));

  constructor(private http: HttpClient) {}
}
