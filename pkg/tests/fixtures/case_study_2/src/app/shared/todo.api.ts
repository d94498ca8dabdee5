import { Injectable } from '@angular/core';
import { HttpClient } from '@angular/common/http';
import { Observable, Subject } from 'rxjs';
import { map } from 'rxjs/operators';
import type { Todo } from '../todos/todo-list.component';

@Injectable({ providedIn: 'root' })
export class TodoApi {
  // services are not components, so none of these fields are checked
  private readonly unused$ = new Subject<void>();
  private readonly counter$ = new Subject<number>();
  readonly doubled$ = this.counter$.pipe(map(n => n * 2));

  constructor(private http: HttpClient) {}

  save(todos: Todo[]): Observable<boolean> {
    return this.http.put<void>('/api/todos', todos).pipe(map(() => true));
  }
}
